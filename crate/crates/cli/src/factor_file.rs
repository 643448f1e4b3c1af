//! JSON factor files: `{"field", "sfs", "A", "B"?, "C"}` with each matrix a
//! list of rows and complex entries written as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tenuniq::{FactorSet, Field, FieldFactorSet, Matrix, Scalar};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

type Rows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorFile {
    pub field: Field,
    #[serde(default)]
    pub sfs: bool,
    #[serde(rename = "A")]
    pub a: Rows,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Rows>,
    #[serde(rename = "C")]
    pub c: Rows,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::FactorFile(msg.into())
}

fn real_entry(e: &Entry, name: &str) -> Result<f64, CliError> {
    match *e {
        Entry::Real(x) => Ok(x),
        Entry::Complex(_) => Err(bad(format!("{name}: complex entry in a real file"))),
    }
}

fn complex_entry(e: &Entry, name: &str) -> Result<Complex64, CliError> {
    match *e {
        Entry::Complex([re, im]) => Ok(Complex64::new(re, im)),
        Entry::Real(_) => Err(bad(format!(
            "{name}: complex files write every entry as [re, im]"
        ))),
    }
}

fn matrix<S: Scalar>(
    rows: &Rows,
    name: &str,
    entry: impl Fn(&Entry, &str) -> Result<S, CliError>,
) -> Result<Matrix<S>, CliError> {
    let parsed: Vec<Vec<S>> = rows
        .iter()
        .map(|row| row.iter().map(|e| entry(e, name)).collect())
        .collect::<Result<_, _>>()?;
    let m = Matrix::from_rows(&parsed).map_err(|e| bad(format!("{name}: {e}")))?;
    if !m.is_finite() {
        return Err(bad(format!("{name}: non-finite entry")));
    }
    Ok(m)
}

fn build<S: Scalar>(
    f: &FactorFile,
    entry: impl Fn(&Entry, &str) -> Result<S, CliError> + Copy,
) -> Result<FactorSet<S>, CliError> {
    let a = matrix(&f.a, "A", entry)?;
    let c = matrix(&f.c, "C", entry)?;
    let set = if f.sfs {
        if let Some(b) = &f.b {
            if matrix(b, "B", entry)? != a {
                return Err(bad("sfs is set but B differs from A"));
            }
        }
        FactorSet::sfs(a, c)
    } else {
        let b =
            f.b.as_ref()
                .ok_or_else(|| bad("B is required unless sfs is set"))?;
        FactorSet::new(a, matrix(b, "B", entry)?, c)
    };
    set.map_err(|e| bad(e.to_string()))
}

fn rows_of<S: Scalar>(m: &Matrix<S>, entry: impl Fn(S) -> Entry) -> Rows {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(&entry).collect())
        .collect()
}

impl FactorFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let finite = [Some(&self.a), self.b.as_ref(), Some(&self.c)]
            .into_iter()
            .flatten()
            .flatten()
            .flatten()
            .all(|e| match *e {
                Entry::Real(x) => x.is_finite(),
                Entry::Complex([re, im]) => re.is_finite() && im.is_finite(),
            });
        if !finite {
            return Err(bad("non-finite entries cannot be written as JSON"));
        }
        serde_json::to_string_pretty(self).map_err(|e| CliError::Render(e.to_string()))
    }

    pub fn to_factors(&self) -> Result<FieldFactorSet, CliError> {
        Ok(match self.field {
            Field::Real => FieldFactorSet::Real(build(self, real_entry)?),
            Field::Complex => FieldFactorSet::Complex(build(self, complex_entry)?),
        })
    }

    pub fn from_factors(f: &FieldFactorSet) -> Self {
        fn of<S: Scalar>(
            f: &FactorSet<S>,
            field: Field,
            entry: impl Fn(S) -> Entry + Copy,
        ) -> FactorFile {
            FactorFile {
                field,
                sfs: f.is_sfs(),
                a: rows_of(f.a(), entry),
                b: (!f.is_sfs()).then(|| rows_of(f.b(), entry)),
                c: rows_of(f.c(), entry),
            }
        }
        match f {
            FieldFactorSet::Real(f) => of(f, Field::Real, Entry::Real),
            FieldFactorSet::Complex(f) => of(f, Field::Complex, |z: Complex64| {
                Entry::Complex([z.re, z.im])
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_file() {
        let f = FactorFile::parse(
            r#"{"field": "real", "sfs": false, "A": [[1, 0], [0, 1]], "B": [[1, 2], [3, 4]], "C": [[1, 1]]}"#,
        )
        .unwrap();
        let FieldFactorSet::Real(set) = f.to_factors().unwrap() else {
            panic!("expected a real set")
        };
        assert_eq!(set.dims(), (2, 2, 1));
        assert_eq!(set.b()[(1, 0)], 3.0);
    }

    #[test]
    fn complex_file_and_sfs() {
        let f = FactorFile::parse(
            r#"{"field": "complex", "sfs": true, "A": [[[1, 2]], [[0, -1]]], "C": [[[0.5, 0]]]}"#,
        )
        .unwrap();
        let set = f.to_factors().unwrap();
        assert!(set.is_sfs());
        assert_eq!(set.field(), Field::Complex);
    }

    #[test]
    fn rejects_inconsistent_files() {
        let cases = [
            r#"{"field": "real", "A": [[1]], "C": [[1]]}"#,
            r#"{"field": "real", "A": [[1, 2]], "B": [[1]], "C": [[1, 2]]}"#,
            r#"{"field": "real", "A": [[1, 2], [3]], "B": [[1, 2]], "C": [[1, 2]]}"#,
            r#"{"field": "real", "A": [[[1, 0]]], "B": [[1]], "C": [[1]]}"#,
            r#"{"field": "complex", "A": [[1]], "B": [[[1, 0]]], "C": [[[1, 0]]]}"#,
            r#"{"field": "real", "sfs": true, "A": [[1]], "B": [[2]], "C": [[1]]}"#,
            r#"{"field": "real", "A": [], "B": [], "C": []}"#,
            r#"{"field": "quaternion", "A": [[1]], "B": [[1]], "C": [[1]]}"#,
            r#"{"field": "real", "A": [[1]], "B": [[1]], "C": [[1]], "D": 1}"#,
            r#"{"field": "real", "A": [[1]], "B": [[1]], "C": [[1]"#,
        ];
        for c in cases {
            assert!(
                FactorFile::parse(c).and_then(|f| f.to_factors()).is_err(),
                "{c}"
            );
        }
    }

    #[test]
    fn refuses_to_write_non_finite() {
        let f = FactorFile {
            field: Field::Real,
            sfs: true,
            a: vec![vec![Entry::Real(f64::NAN)]],
            b: None,
            c: vec![vec![Entry::Real(1.0)]],
        };
        assert!(f.to_json().is_err());
    }
}
