//! Braid/matrix tables for the congruence-subgroup generation check: loading,
//! membership of every listed matrix, and reproduction of each matrix from
//! its braid on the canonical factorization.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{braid_matrix, gamma_membership, Mat2Z};
use crate::error::{Error, Result};
use crate::gamma2::{gamma2_generation_certificate, Gamma2Certificate};
use crate::hurwitz::{apply_braid_word, BraidWord};
use crate::rootsys::{build_elliptic, coxeter_transformation, EllipticRootSystem, EllipticType};
use crate::weyl::{Ambient, LatticeAutomorphism, ReflectionTuple};

pub const DATA_ENV: &str = "HURWITZ_LAB_DATA";
const EMBEDDED: &str = include_str!("../data/tables.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub id: String,
    #[serde(rename = "type")]
    pub type_tag: String,
    pub table: u32,
    /// `conjugate` rows use `tau^-1 rho tau`, `direct` rows use `tau` alone.
    pub kind: String,
    #[serde(default)]
    pub tau: Option<Vec<i32>>,
    #[serde(default)]
    pub tau_variants: Option<Vec<Vec<i32>>>,
    #[serde(default)]
    pub rho: Option<Vec<i32>>,
    pub matrix: Mat2Z,
    /// `ok`, `ambiguous` (several readings tried) or `unparsable`.
    pub status: String,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub printed: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableData {
    pub schema: String,
    pub letter_convention: String,
    pub rows: Vec<TableRow>,
    #[serde(default)]
    pub supplementary: Vec<TableRow>,
}

impl TableData {
    pub fn embedded() -> TableData {
        serde_json::from_str(EMBEDDED).expect("embedded table data parses")
    }

    pub fn from_path(p: &Path) -> Result<TableData> {
        let s =
            std::fs::read_to_string(p).map_err(|e| Error::Data(format!("{}: {e}", p.display())))?;
        serde_json::from_str(&s).map_err(|e| Error::Data(format!("{}: {e}", p.display())))
    }

    /// The file named by `HURWITZ_LAB_DATA`, else the embedded copy.
    pub fn load() -> Result<TableData> {
        match std::env::var_os(DATA_ENV) {
            Some(p) => TableData::from_path(Path::new(&p)),
            None => Ok(TableData::embedded()),
        }
    }

    pub fn rows_for(&self, tag: EllipticType) -> Vec<&TableRow> {
        let name = tag.finite().to_string();
        self.rows.iter().filter(|r| r.type_tag == name).collect()
    }
}

/// Table letter `i` is the inverse of the move `sigma_i` used in
/// [`crate::hurwitz`]; this converts a table word to move letters.
pub fn table_word(letters: &[i32]) -> BraidWord {
    BraidWord::new(letters.iter().map(|l| -l).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Reproduction {
    Match,
    Mismatch { computed: Mat2Z },
    NotStabilizing,
    Unparsable,
    Failed { error: String },
}

/// Which base tuple a braid is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Base {
    /// `s_1 .. s_n s_0 s_t s_t*` with `s_t` omitted from the first block.
    Canonical,
    /// The canonical tuple with the `(s_t, s_t*)` pair walked left, unchanged,
    /// to the strand where the table's one-letter braid acts.
    PairRelocated,
}

/// How table letters map to moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LetterReading {
    /// Table `i` is the inverse move (the D4 convention).
    Inverse,
    /// Table `i` is the move itself.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub base: Base,
    pub reading: LetterReading,
    /// Index into the row's braid readings (more than one when ambiguous).
    pub variant: usize,
    pub outcome: Reproduction,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowReport {
    pub id: String,
    pub table: u32,
    pub printed_matrix: Mat2Z,
    pub membership: bool,
    pub attempts: Vec<Attempt>,
    pub notes: Vec<String>,
}

impl RowReport {
    pub fn reproduced(&self) -> bool {
        self.attempts
            .iter()
            .any(|a| a.outcome == Reproduction::Match)
    }

    /// Outcome under the canonical base and the inverse reading.
    pub fn primary(&self) -> Option<&Reproduction> {
        self.attempts
            .iter()
            .find(|a| a.base == Base::Canonical && a.reading == LetterReading::Inverse)
            .map(|a| &a.outcome)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableReport {
    pub type_tag: String,
    pub ell: u32,
    pub rows: Vec<RowReport>,
    pub supplementary: Vec<RowReport>,
    /// Level-2 generation certificate on the listed matrices (D4 only).
    pub certificate: Option<Gamma2Certificate>,
}

impl TableReport {
    pub fn all_members(&self) -> bool {
        self.rows.iter().all(|r| r.membership)
    }

    pub fn all_reproduced(&self) -> bool {
        self.rows.iter().all(|r| r.reproduced())
    }
}

/// Strand (1-based) of the left end of the `(s_t, s_t*)` pair in the tables'
/// base tuple, read off the one-letter generator of each table.
pub fn table_pair_strand(tag: EllipticType) -> usize {
    match tag {
        EllipticType::D4 => 5,
        EllipticType::E6 => 1,
        EllipticType::E7 => 5,
        EllipticType::E8 => 4,
    }
}

/// Canonical tuple with the trailing pair moved to start at `strand`.
pub fn relocated_base(sys: &EllipticRootSystem, strand: usize) -> Result<ReflectionTuple> {
    let base = ReflectionTuple::new(Ambient::elliptic(sys), sys.canonical_roots())?;
    let n = sys.rank();
    let mut letters = Vec::new();
    for p in (strand..=n).rev() {
        letters.extend([p as i32, p as i32 + 1]);
    }
    apply_braid_word(&base, &BraidWord::new(letters))
}

fn read_word(letters: &[i32], reading: LetterReading) -> BraidWord {
    match reading {
        LetterReading::Inverse => table_word(letters),
        LetterReading::Direct => BraidWord::new(letters.to_vec()),
    }
}

fn row_words(row: &TableRow, reading: LetterReading) -> Option<Vec<BraidWord>> {
    if row.status == "unparsable" {
        return None;
    }
    let taus: Vec<Vec<i32>> = match (&row.tau, &row.tau_variants) {
        (Some(t), _) => vec![t.clone()],
        (None, Some(v)) => v.clone(),
        (None, None) => return None,
    };
    Some(
        taus.iter()
            .map(|t| {
                let tau = read_word(t, reading);
                match &row.rho {
                    Some(r) if row.kind == "conjugate" => {
                        BraidWord::conjugate(&read_word(r, reading), &tau)
                    }
                    _ => tau,
                }
            })
            .collect(),
    )
}

fn check_row(
    sys: &EllipticRootSystem,
    c: &LatticeAutomorphism,
    bases: &[(Base, ReflectionTuple)],
    row: &TableRow,
) -> RowReport {
    let membership = gamma_membership(&row.matrix, sys.ell as i64);
    let mut attempts = Vec::new();
    for (base, t) in bases {
        for reading in [LetterReading::Inverse, LetterReading::Direct] {
            let Some(words) = row_words(row, reading) else {
                attempts.push(Attempt {
                    base: *base,
                    reading,
                    variant: 0,
                    outcome: Reproduction::Unparsable,
                });
                continue;
            };
            for (variant, w) in words.iter().enumerate() {
                let outcome = match braid_matrix(sys, c, t, w) {
                    Ok(m) if m == row.matrix => Reproduction::Match,
                    Ok(m) => Reproduction::Mismatch { computed: m },
                    Err(Error::NotStabilizing) => Reproduction::NotStabilizing,
                    Err(e) => Reproduction::Failed {
                        error: e.to_string(),
                    },
                };
                attempts.push(Attempt {
                    base: *base,
                    reading,
                    variant,
                    outcome,
                });
            }
        }
    }
    RowReport {
        id: row.id.clone(),
        table: row.table,
        printed_matrix: row.matrix,
        membership,
        attempts,
        notes: row.notes.clone(),
    }
}

/// Checks every row for `tag` against the canonical factorization of `c`.
pub fn verify_tables(tag: EllipticType, data: &TableData) -> Result<TableReport> {
    let sys = build_elliptic(tag)?;
    let c = coxeter_transformation(&sys);
    let mut bases = vec![(
        Base::Canonical,
        ReflectionTuple::new(Ambient::elliptic(&sys), sys.canonical_roots())?,
    )];
    let strand = table_pair_strand(tag);
    if strand != sys.rank() + 1 {
        bases.push((Base::PairRelocated, relocated_base(&sys, strand)?));
    }
    let name = tag.finite().to_string();
    let run = |rows: &[TableRow]| -> Vec<RowReport> {
        rows.par_iter()
            .filter(|r| r.type_tag == name)
            .map(|r| check_row(&sys, &c, &bases, r))
            .collect()
    };
    let rows = run(&data.rows);
    let supplementary = run(&data.supplementary);
    let certificate = if sys.ell == 2 {
        let gens: Vec<Mat2Z> = rows.iter().map(|r| r.printed_matrix).collect();
        Some(gamma2_generation_certificate(&gens)?)
    } else {
        None
    };
    Ok(TableReport {
        type_tag: tag.to_string(),
        ell: sys.ell,
        rows,
        supplementary,
        certificate,
    })
}
