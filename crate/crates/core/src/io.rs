//! Tab-separated matrix files.
//!
//! Every file is a grid with one header row of column ids and one header
//! column of row ids. The corner cell is ignored. Cells are decimal floats;
//! empty cells are errors.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::dataset::{DtiDataset, InteractionMatrix, Side, SimilarityMatrix};
use crate::error::{Error, Result};

/// Row convention of an interaction file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    DrugRows,
    TargetRows,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    pub values: Array2<f64>,
}

impl LabeledMatrix {
    pub fn transpose(self) -> Self {
        Self {
            row_ids: self.col_ids,
            col_ids: self.row_ids,
            values: self
                .values
                .reversed_axes()
                .as_standard_layout()
                .into_owned(),
        }
    }
}

pub fn read_labeled_matrix(path: impl AsRef<Path>) -> Result<LabeledMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_labeled_matrix(BufReader::new(file), path)
}

pub fn parse_labeled_matrix(reader: impl BufRead, path: &Path) -> Result<LabeledMatrix> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = reader.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(l) => {
            let l = l.trim_end_matches('\r').to_string();
            if l.trim().is_empty() {
                None
            } else {
                Some(Ok((i + 1, l)))
            }
        }
        Err(e) => Some(Err(Error::io(path, e))),
    });

    let (_, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    let header: Vec<&str> = header.split('\t').collect();
    let header_cols: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();

    let mut row_ids = Vec::new();
    let mut data = Vec::new();
    let mut width: Option<usize> = None;
    for item in lines {
        let (lineno, line) = item?;
        let mut cells = line.split('\t');
        let id = cells.next().unwrap_or_default().trim().to_string();
        if id.is_empty() {
            return Err(parse_err(lineno, "missing row id".into()));
        }
        let mut row = Vec::new();
        for (c, cell) in cells.enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(parse_err(
                    lineno,
                    format!("missing value in column {}", c + 1),
                ));
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(lineno, format!("cannot parse `{cell}` as a number")))?;
            if !v.is_finite() {
                return Err(parse_err(lineno, format!("non-finite value `{cell}`")));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    lineno,
                    format!("expected {w} values, found {}", row.len()),
                ))
            }
            _ => {}
        }
        row_ids.push(id);
        data.extend(row);
    }
    let width = width.ok_or_else(|| parse_err(1, "no data rows".into()))?;
    if width == 0 {
        return Err(parse_err(2, "rows carry no values".into()));
    }
    // Header normally carries a corner cell; tolerate files that omit it.
    let col_ids = if header_cols.len() == width + 1 {
        header_cols[1..].to_vec()
    } else if header_cols.len() == width {
        header_cols
    } else {
        return Err(parse_err(
            1,
            format!(
                "header has {} cells but rows carry {width} values",
                header_cols.len()
            ),
        ));
    };
    if col_ids.iter().any(|c| c.is_empty()) {
        return Err(parse_err(1, "empty column id".into()));
    }
    let values = Array2::from_shape_vec((row_ids.len(), width), data)
        .map_err(|e| Error::Dimension(e.to_string()))?;
    Ok(LabeledMatrix {
        row_ids,
        col_ids,
        values,
    })
}

/// Writes a grid in the same layout the reader accepts. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_labeled_matrix<W: Write>(
    mut w: W,
    row_ids: &[String],
    col_ids: &[String],
    values: ArrayView2<'_, f64>,
) -> std::io::Result<()> {
    for id in col_ids {
        write!(w, "\t{id}")?;
    }
    writeln!(w)?;
    for (id, row) in row_ids.iter().zip(values.rows()) {
        write!(w, "{id}")?;
        for v in row {
            write!(w, "\t{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn write_labeled_matrix_file(
    path: impl AsRef<Path>,
    row_ids: &[String],
    col_ids: &[String],
    values: ArrayView2<'_, f64>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_labeled_matrix(BufWriter::new(file), row_ids, col_ids, values)
        .map_err(|e| Error::io(path, e))
}

/// Locations of the three files that make up one dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub interactions: PathBuf,
    pub drug_sim: PathBuf,
    pub target_sim: PathBuf,
}

impl DatasetPaths {
    /// File names used by the public gold-standard distribution, e.g.
    /// `nr_admat_dgc.txt`, `nr_simmat_dc.txt`, `nr_simmat_dg.txt`. Their
    /// interaction files are target-rows.
    pub fn gold_standard(dir: impl AsRef<Path>, name: &str) -> Self {
        let dir = dir.as_ref();
        let name = name.to_lowercase();
        Self {
            interactions: dir.join(format!("{name}_admat_dgc.txt")),
            drug_sim: dir.join(format!("{name}_simmat_dc.txt")),
            target_sim: dir.join(format!("{name}_simmat_dg.txt")),
        }
    }
}

pub fn load_dataset_from(paths: &DatasetPaths, orientation: Orientation) -> Result<DtiDataset> {
    load_dataset(
        &paths.interactions,
        &paths.drug_sim,
        &paths.target_sim,
        orientation,
    )
}

/// Loads and validates a dataset. Similarity files may list their ids in any
/// order; they are reordered to the interaction file's order.
pub fn load_dataset(
    interaction_path: impl AsRef<Path>,
    drug_sim_path: impl AsRef<Path>,
    target_sim_path: impl AsRef<Path>,
    orientation: Orientation,
) -> Result<DtiDataset> {
    let mut y = read_labeled_matrix(interaction_path)?;
    if orientation == Orientation::TargetRows {
        y = y.transpose();
    }
    check_unique(&y.row_ids, "interaction drug ids")?;
    check_unique(&y.col_ids, "interaction target ids")?;
    let interactions = InteractionMatrix::from_f64(&y.values)?;

    let drug_sim = align_similarity(read_labeled_matrix(drug_sim_path)?, &y.row_ids, Side::Drug)?;
    let target_sim = align_similarity(
        read_labeled_matrix(target_sim_path)?,
        &y.col_ids,
        Side::Target,
    )?;

    DtiDataset::new(y.row_ids, y.col_ids, drug_sim, target_sim, interactions)
}

fn check_unique(ids: &[String], what: &'static str) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId {
                id: id.clone(),
                what,
            });
        }
    }
    Ok(())
}

fn align_similarity(sim: LabeledMatrix, ids: &[String], side: Side) -> Result<SimilarityMatrix> {
    let (what_rows, what_cols) = match side {
        Side::Drug => ("drug similarity row ids", "drug similarity column ids"),
        Side::Target => ("target similarity row ids", "target similarity column ids"),
    };
    check_unique(&sim.row_ids, what_rows)?;
    check_unique(&sim.col_ids, what_cols)?;
    if sim.values.nrows() != ids.len() || sim.values.ncols() != ids.len() {
        return Err(Error::Dimension(format!(
            "{side} similarity is {}x{}, interaction file has {} {side}s",
            sim.values.nrows(),
            sim.values.ncols(),
            ids.len()
        )));
    }
    let rows = positions(&sim.row_ids, ids, side)?;
    let cols = positions(&sim.col_ids, ids, side)?;
    let values = Array2::from_shape_fn((ids.len(), ids.len()), |(a, b)| {
        sim.values[(rows[a], cols[b])]
    });
    if let Some(((row, col), &value)) = values
        .indexed_iter()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::SimilarityRange { row, col, value });
    }
    SimilarityMatrix::new(values, side)
}

/// For each wanted id, its position in `have`.
fn positions(have: &[String], wanted: &[String], side: Side) -> Result<Vec<usize>> {
    let index: HashMap<&str, usize> = have
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    wanted
        .iter()
        .map(|id| {
            index.get(id.as_str()).copied().ok_or_else(|| {
                Error::IdMismatch(format!(
                    "{side} `{id}` from the interaction file is missing from the {side} similarity file"
                ))
            })
        })
        .collect()
}

/// Writes the three files of a dataset so that [`load_dataset`] with the same
/// orientation reproduces it exactly.
pub fn write_dataset(
    ds: &DtiDataset,
    paths: &DatasetPaths,
    orientation: Orientation,
) -> Result<()> {
    let y = ds.interactions().to_f64();
    match orientation {
        Orientation::DrugRows => write_labeled_matrix_file(
            &paths.interactions,
            ds.drug_ids(),
            ds.target_ids(),
            y.view(),
        )?,
        Orientation::TargetRows => {
            write_labeled_matrix_file(&paths.interactions, ds.target_ids(), ds.drug_ids(), y.t())?
        }
    }
    write_labeled_matrix_file(
        &paths.drug_sim,
        ds.drug_ids(),
        ds.drug_ids(),
        ds.drug_sim().view(),
    )?;
    write_labeled_matrix_file(
        &paths.target_sim,
        ds.target_ids(),
        ds.target_ids(),
        ds.target_sim().view(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(s: &str) -> Result<LabeledMatrix> {
        parse_labeled_matrix(Cursor::new(s), Path::new("mem.tsv"))
    }

    #[test]
    fn parses_with_and_without_corner() {
        let a = parse("\tt1\tt2\nd1\t1\t0\nd2\t0\t1\n").unwrap();
        let b = parse("t1\tt2\r\nd1\t1\t0\r\nd2\t0\t1\r\n\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.col_ids, vec!["t1", "t2"]);
        assert_eq!(a.row_ids, vec!["d1", "d2"]);
    }

    #[test]
    fn corner_label_ignored() {
        let a = parse("drug\tt1\nd1\t0.5\n").unwrap();
        assert_eq!(a.col_ids, vec!["t1"]);
        assert_eq!(a.values[(0, 0)], 0.5);
    }

    #[test]
    fn missing_value_is_error() {
        let err = parse("\tt1\tt2\nd1\t1\t\n").unwrap_err();
        assert!(err.to_string().contains("missing value"));
    }

    #[test]
    fn ragged_rows_are_error() {
        assert!(parse("\tt1\tt2\nd1\t1\t0\nd2\t1\n").is_err());
        assert!(parse("\tt1\tt2\tt3\nd1\t1\t0\n").is_err());
        assert!(parse("\tt1\nd1\tabc\n").is_err());
    }

    #[test]
    fn transpose_swaps_ids() {
        let a = parse("\tt1\tt2\td3\nd1\t1\t0\t1\n").unwrap().transpose();
        assert_eq!(a.row_ids.len(), 3);
        assert_eq!(a.values[(2, 0)], 1.0);
    }
}
