//! CSV ingestion and design-matrix construction.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::warn;
use nalgebra::DMatrix;
use zip3::ModelSpec;

use crate::config::{RunConfig, Submodel};
use crate::error::{write_error, CliError, CliResult};

/// Raw CSV contents: a header row and string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub source: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let data_err = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| data_err(format!("cannot open data file: {e}")))?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| data_err(format!("cannot read header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| data_err(format!("row {}: {e}", i + 1)))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self {
            source: path.to_path_buf(),
            headers,
            rows,
        })
    }

    fn column_index(&self, name: &str) -> CliResult<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Data(format!(
                "{}: column '{name}' not found (have: {})",
                self.source.display(),
                self.headers.join(", ")
            ))
        })
    }

    /// Cells of one column; a blank cell is an error naming its row.
    fn column(&self, name: &str) -> CliResult<Vec<&str>> {
        let j = self.column_index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| match row[j].as_str() {
                "" => Err(self.cell_error(i, name, "missing value".to_string())),
                v => Ok(v),
            })
            .collect()
    }

    fn cell_error(&self, row: usize, column: &str, msg: String) -> CliError {
        CliError::Data(format!(
            "{}: row {} (line {}), column '{column}': {msg}",
            self.source.display(),
            row + 1,
            row + 2
        ))
    }
}

/// One design-matrix column and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub submodel: Submodel,
    /// `(Intercept)` or the data column name.
    pub term: String,
    /// Non-reference level for a dummy column.
    pub level: Option<String>,
}

pub const INTERCEPT: &str = "(Intercept)";

#[derive(Debug, Clone, PartialEq)]
enum Values {
    Numeric(Vec<f64>),
    /// Per-row level index into `levels`, reference level first.
    Categorical { levels: Vec<String>, codes: Vec<usize> },
}

/// A model-ready dataset: the spec plus column provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: ModelSpec,
    pub columns: Vec<Column>,
    response: String,
    y: Vec<u64>,
    values: Vec<(String, Values)>,
}

fn parse_response(table: &Table, name: &str) -> CliResult<Vec<u64>> {
    let cells = table.column(name)?;
    cells
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.parse::<u64>().map_err(|_| {
                table.cell_error(i, name, format!("'{v}' is not a nonnegative integer count"))
            })
        })
        .collect()
}

fn parse_numeric(table: &Table, name: &str) -> CliResult<Vec<f64>> {
    let cells = table.column(name)?;
    cells
        .iter()
        .enumerate()
        .map(|(i, v)| match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(table.cell_error(
                i,
                name,
                format!("cannot parse '{v}' as a number (declare the column categorical?)"),
            )),
        })
        .collect()
}

fn parse_categorical(table: &Table, name: &str, reference: Option<&str>) -> CliResult<Values> {
    let cells = table.column(name)?;
    let mut seen: Vec<String> = Vec::new();
    for v in &cells {
        if !seen.iter().any(|s| s == v) {
            seen.push(v.to_string());
        }
    }
    let reference = match reference {
        Some(r) => {
            if !seen.iter().any(|s| s == r) {
                return Err(CliError::Data(format!(
                    "{}: reference level '{r}' does not occur in column '{name}' (levels: {})",
                    table.source.display(),
                    seen.join(", ")
                )));
            }
            r.to_string()
        }
        None => {
            warn!(
                "no reference level declared for '{name}'; using first observed level '{}'",
                seen[0]
            );
            seen[0].clone()
        }
    };
    if seen.len() < 2 {
        return Err(CliError::Data(format!(
            "{}: categorical column '{name}' has {} level(s); need at least 2",
            table.source.display(),
            seen.len()
        )));
    }
    let mut levels = vec![reference.clone()];
    levels.extend(seen.into_iter().filter(|s| *s != reference));
    let codes = cells
        .iter()
        .map(|v| levels.iter().position(|l| l == v).unwrap())
        .collect();
    Ok(Values::Categorical { levels, codes })
}

impl Dataset {
    pub fn load(config: &RunConfig) -> CliResult<Self> {
        Self::from_table(config, &Table::read(&config.data_path)?)
    }

    pub fn from_table(config: &RunConfig, table: &Table) -> CliResult<Self> {
        for c in &config.categorical {
            table.column_index(&c.column)?;
        }
        let y = parse_response(table, &config.response)?;
        let mut values: Vec<(String, Values)> = Vec::new();
        for term in config.mu_terms.iter().chain(&config.phi_terms) {
            if values.iter().any(|(name, _)| name == term) {
                continue;
            }
            let declared = config.categorical.iter().find(|c| &c.column == term);
            let v = match declared {
                Some(c) => parse_categorical(table, term, c.reference.as_deref())?,
                None => Values::Numeric(parse_numeric(table, term)?),
            };
            values.push((term.clone(), v));
        }
        for c in &config.categorical {
            if !values.iter().any(|(name, _)| *name == c.column) {
                warn!("categorical column '{}' is not used by any term", c.column);
            }
        }
        Self::assemble(config, y, values)
    }

    fn assemble(config: &RunConfig, y: Vec<u64>, values: Vec<(String, Values)>) -> CliResult<Self> {
        let n = y.len();
        let mut columns = Vec::new();
        let mut build = |submodel: Submodel, terms: &[String]| {
            let mut cols: Vec<Vec<f64>> = vec![vec![1.0; n]];
            columns.push(Column {
                submodel,
                term: INTERCEPT.to_string(),
                level: None,
            });
            for term in terms {
                let (_, v) = values.iter().find(|(name, _)| name == term).unwrap();
                match v {
                    Values::Numeric(x) => {
                        cols.push(x.clone());
                        columns.push(Column {
                            submodel,
                            term: term.clone(),
                            level: None,
                        });
                    }
                    Values::Categorical { levels, codes } => {
                        for (k, level) in levels.iter().enumerate().skip(1) {
                            cols.push(codes.iter().map(|&c| if c == k { 1.0 } else { 0.0 }).collect());
                            columns.push(Column {
                                submodel,
                                term: term.clone(),
                                level: Some(level.clone()),
                            });
                        }
                    }
                }
            }
            DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i])
        };
        let x = build(Submodel::Mu, &config.mu_terms);
        let z = build(Submodel::Phi, &config.phi_terms);
        let spec = ModelSpec::new(y.clone(), x, z, config.link_mu, config.link_phi)?;
        Ok(Self {
            spec,
            columns,
            response: config.response.clone(),
            y,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Levels of each categorical term, reference first.
    pub fn levels(&self) -> BTreeMap<&str, &[String]> {
        self.values
            .iter()
            .filter_map(|(name, v)| match v {
                Values::Categorical { levels, .. } => Some((name.as_str(), levels.as_slice())),
                Values::Numeric(_) => None,
            })
            .collect()
    }

    /// Indices into the stacked coefficient vector belonging to a term.
    pub fn term_indices(&self, submodel: Submodel, term: &str) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.submodel == submodel && c.term == term)
            .map(|(i, _)| i)
            .collect()
    }

    /// `spec` with every column of one term removed.
    pub fn drop_term(&self, spec: &ModelSpec, submodel: Submodel, term: &str) -> CliResult<ModelSpec> {
        let q1 = spec.q_mu();
        let idx = self.term_indices(submodel, term);
        let (x, z) = match submodel {
            Submodel::Mu => (spec.x().clone().remove_columns_at(&idx), spec.z().clone()),
            Submodel::Phi => {
                let local: Vec<usize> = idx.iter().map(|i| i - q1).collect();
                (spec.x().clone(), spec.z().clone().remove_columns_at(&local))
            }
        };
        Ok(ModelSpec::new(
            spec.y().to_vec(),
            x,
            z,
            spec.link_mu(),
            spec.link_phi(),
        )?)
    }

    /// Writes the response and every term column in parsed form.
    ///
    /// Reading the file back with the same configuration rebuilds an equal spec.
    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| write_error(path, e))?;
        let mut header = vec![self.response.clone()];
        header.extend(self.values.iter().map(|(name, _)| name.clone()));
        w.write_record(&header).map_err(|e| write_error(path, e))?;
        for i in 0..self.y.len() {
            let mut rec = vec![self.y[i].to_string()];
            for (_, v) in &self.values {
                rec.push(match v {
                    Values::Numeric(x) => x[i].to_string(),
                    Values::Categorical { levels, codes } => levels[codes[i]].clone(),
                });
            }
            w.write_record(&rec).map_err(|e| write_error(path, e))?;
        }
        w.flush().map_err(|e| write_error(path, e))
    }
}
