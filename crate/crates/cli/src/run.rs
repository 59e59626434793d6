//! One run: build the geometry once, compute the requested objects in order
//! and render a document for each.

use std::ffi::OsString;

use clap::Parser;
use finsler_core::oracle::{verify, verify_tensor};
use finsler_core::simplify::{simplify_via_lowering, LoweredObject};
use finsler_core::{FinslerStructure, Geometry, GeometryError, ObjectId, Tensor};

use crate::config::{Args, MetricSource, RunConfig};
use crate::emit::{classification_document, tensor_document, TensorDoc};
use crate::error::CliError;

/// Documents of a run and whether every requested check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub documents: Vec<String>,
    pub verified: bool,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.verified {
            0
        } else {
            2
        }
    }
}

pub fn structure(cfg: &RunConfig) -> Result<FinslerStructure, CliError> {
    let coords = cfg.coords.clone();
    let fs = match &cfg.metric {
        MetricSource::FSquared(text) => FinslerStructure::new(coords, text)?,
        MetricSource::F(text) => FinslerStructure::from_f(coords, text)?,
    };
    Ok(match &cfg.constraints {
        Some(text) => fs.with_constraint_text(text)?,
        None => fs,
    })
}

fn in_context(id: &ObjectId) -> impl Fn(GeometryError) -> CliError + '_ {
    move |source| CliError::Object { object: id.to_string(), source }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let geom = Geometry::build(structure(cfg)?)?;
    let coords = geom.coords().clone();
    let mut report = Report { documents: Vec::new(), verified: true };
    for id in &cfg.objects {
        let ctx = in_context(id);
        if *id == ObjectId::Classify {
            let class = geom.classify().map_err(&ctx)?;
            let check = cfg.check.as_ref().map(|opts| verify(&geom, id, opts)).transpose().map_err(&ctx)?;
            report.verified &= check.as_ref().map_or(true, |c| c.passed());
            report.documents.push(classification_document(&class, &coords, check.as_ref(), cfg.format));
            continue;
        }
        let simplified = match LoweredObject::from_id(id) {
            Ok(object) if cfg.lower_simplify => Some(simplify_via_lowering(&geom, object).map_err(&ctx)?.tensor),
            _ => None,
        };
        let tensor: Tensor = match simplified {
            Some(t) => t,
            None => (*geom.tensor(id).map_err(&ctx)?).clone(),
        };
        let check = cfg
            .check
            .as_ref()
            .map(|opts| verify_tensor(geom.structure(), &tensor, id, opts))
            .transpose()
            .map_err(&ctx)?;
        report.verified &= check.as_ref().map_or(true, |c| c.passed());
        let components = tensor.nonzero_components(cfg.full_table, geom.zero_test());
        let doc = TensorDoc {
            id,
            tensor: &tensor,
            components: &components,
            coords: &coords,
            symmetry_reduced: !cfg.full_table,
            check: check.as_ref(),
        };
        report.documents.push(tensor_document(&doc, cfg.format));
    }
    Ok(report)
}

/// What the binary prints and returns.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (program name first). `seed` is the value of
/// `FINSLER_SEED`, if set.
pub fn execute<I, T>(argv: I, seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let fail = |e: String| Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") };
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() },
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: e.to_string() },
    };
    let args = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match Args::from_config_text(&text) {
                Ok(file) => args.over(file),
                Err(e) => return fail(format!("{}:{e}", path.display())),
            },
            Err(source) => return fail(CliError::ConfigFile { path: path.display().to_string(), source }.to_string()),
        },
        None => args,
    };
    let seed = match seed.map(|s| s.trim().parse::<u64>()) {
        Some(Ok(s)) => Some(s),
        Some(Err(_)) => return fail("FINSLER_SEED must be a non-negative integer".into()),
        None => None,
    };
    let result = RunConfig::resolve(args, seed).and_then(|cfg| run(&cfg));
    match result {
        Ok(report) => {
            let mut stdout = report.documents.join("\n\n");
            stdout.push('\n');
            let stderr = if report.verified { String::new() } else { "verification failed\n".into() };
            Outcome { code: report.exit_code(), stdout, stderr }
        }
        Err(e) => fail(e.to_string()),
    }
}
