use serde::Serialize;

/// Outcome of a single law checked on a single instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { detail: String },
    /// The law's hypothesis does not hold here, so nothing was asserted.
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn fail(detail: impl Into<String>) -> Self {
        Verdict::Fail { detail: detail.into() }
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Verdict::NotApplicable { reason: reason.into() }
    }

    pub fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Self {
        if cond {
            Verdict::Pass
        } else {
            Verdict::Fail { detail: detail() }
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    /// First failure wins; otherwise pass if anything passed, else the first
    /// not-applicable.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Self {
        let mut na = None;
        let mut any_pass = false;
        for v in verdicts {
            match v {
                Verdict::Fail { .. } => return v,
                Verdict::Pass => any_pass = true,
                Verdict::NotApplicable { .. } => {
                    na.get_or_insert(v);
                }
            }
        }
        if any_pass {
            Verdict::Pass
        } else {
            na.unwrap_or(Verdict::Pass)
        }
    }
}
