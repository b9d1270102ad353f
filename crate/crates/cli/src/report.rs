use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Poly,
    Oracle,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Poly => "poly",
            Backend::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Length(usize),
    Infeasible,
    /// Not run, with the reason.
    Skipped(String),
    Failed(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Length(l) => write!(f, "{l}"),
            Outcome::Infeasible => f.write_str("infeasible"),
            Outcome::Skipped(why) => write!(f, "skipped:{why}"),
            Outcome::Failed(why) => write!(f, "error:{why}"),
        }
    }
}

/// One tab-separated record: instance, k, caps, solver, result, millis and
/// the decomposition file when one was written.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub instance: String,
    pub k: usize,
    pub lambda1: usize,
    pub lambda2: usize,
    pub backend: Backend,
    pub outcome: Outcome,
    /// `None` prints `-`, which keeps reports reproducible.
    pub millis: Option<u128>,
    pub output: Option<String>,
}

impl RunReport {
    pub const HEADER: &'static str = "instance\tk\tlambda1\tlambda2\tsolver\tresult\tmillis\tfile";

    pub fn line(&self) -> String {
        let millis = self.millis.map_or("-".to_string(), |m| m.to_string());
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            clean(&self.instance),
            self.k,
            self.lambda1,
            self.lambda2,
            self.backend,
            clean(&self.outcome.to_string()),
            millis,
            self.output.as_deref().unwrap_or("-"),
        )
    }
}
