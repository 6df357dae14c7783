//! Executes a [`RunSpec`] and writes its CSV output.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use objectivity::metrics::mi_profile;
use objectivity::{integrate, integrate_nonmarkov, Bath, CollisionModel, FragmentSelection};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, RunSpec, Simulation};
use crate::csv::{format_g12, write_profile, HEADER};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Simulation(#[from] objectivity::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Simulation(e) if e.is_invariant_violation() => 2,
            Self::Simulation(objectivity::Error::InvalidConfig { .. }) => 1,
            Self::Simulation(_) => 2,
            Self::Io { .. } => 3,
        }
    }
}

/// CSV text for a single simulation.
pub fn render(spec: &RunSpec) -> Result<String, objectivity::Error> {
    let mut out = String::from(HEADER);
    out.push('\n');
    match &spec.simulation {
        Simulation::Collision(config) => {
            let model = CollisionModel::new(config)?;
            let selection = FragmentSelection::fragments(config.n_accessible)?;
            for state in model.trajectory()? {
                let state = state?;
                if state.step % spec.record_every == 0 {
                    write_profile(&mut out, &mi_profile(&state.rho, "S", &selection)?.at(state.step as f64));
                }
            }
        }
        Simulation::Lindblad(config) => {
            let records = match config.bath {
                Bath::NonMarkovDephasing => integrate_nonmarkov(config)?,
                _ => integrate(config)?,
            };
            for r in &records {
                write_profile(&mut out, &r.profile);
            }
        }
    }
    Ok(out)
}

/// `{stem}_{key}_{value}.{ext}` next to `base`.
pub fn sweep_path(base: &Path, key: &str, value: f64) -> PathBuf {
    let stem = base.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    let ext = base.extension().map_or_else(|| "csv".into(), |s| s.to_string_lossy().into_owned());
    base.with_file_name(format!("{stem}_{key}_{}.{ext}", format_g12(value)))
}

fn write_file(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|source| RunError::Io { path: path.to_path_buf(), source })
}

/// Runs `spec`. Single runs go to `output` (or the spec's own path, or
/// `stdout` when neither is set); sweeps need a path and write one file per
/// value. Returns the files written.
pub fn run(spec: &RunSpec, output: Option<&Path>, stdout: &mut dyn Write) -> Result<Vec<PathBuf>, RunError> {
    let target = output.map(Path::to_path_buf).or_else(|| spec.output.clone());
    match &spec.sweep {
        None => {
            let text = render(spec)?;
            match target {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(vec![path])
                }
                None => {
                    stdout
                        .write_all(text.as_bytes())
                        .map_err(|source| RunError::Io { path: PathBuf::from("<stdout>"), source })?;
                    Ok(Vec::new())
                }
            }
        }
        Some(axis) => {
            let base = target.ok_or_else(|| ConfigError::Invalid { key: "output".into(), reason: "sweeps need an output path".into() })?;
            let jobs = axis
                .values
                .iter()
                .map(|&v| Ok((spec.with_value(&axis.key, v)?, sweep_path(&base, &axis.key, v))))
                .collect::<Result<Vec<_>, ConfigError>>()?;
            jobs.par_iter()
                .map(|(single, path)| {
                    let single = RunSpec { sweep: None, ..single.clone() };
                    write_file(path, &render(&single)?)?;
                    Ok(path.clone())
                })
                .collect()
        }
    }
}
