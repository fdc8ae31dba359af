//! Real quantifier elimination backends.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::real::{parse_real, RealFormula};
use crate::simplify::Context;
use crate::vs::vs_eliminate_in;

pub const TIMEOUT_ENV: &str = "PCQE_BACKEND_TIMEOUT_SECS";
pub const DEFAULT_TIMEOUT_SECS: u64 = 300;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// Virtual substitution for variables of degree at most 2.
    #[default]
    Builtin,
    /// A shell command speaking the pipe protocol.
    External(String),
}

impl Backend {
    pub fn name(&self) -> String {
        match self {
            Backend::Builtin => "builtin".into(),
            Backend::External(cmd) => format!("exec:{cmd}"),
        }
    }

    /// Eliminates the quantifiers of the prenex formula `psi`.
    pub fn eliminate(&self, psi: &RealFormula, ctx: &Context, timeout: Option<Duration>) -> Result<RealFormula> {
        match self {
            Backend::Builtin => vs_eliminate_in(psi, ctx),
            Backend::External(cmd) => run_external(psi, cmd, timeout),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "builtin" {
            Ok(Backend::Builtin)
        } else if let Some(cmd) = s.strip_prefix("exec:") {
            if cmd.trim().is_empty() {
                return Err(Error::Context("empty backend command".into()));
            }
            Ok(Backend::External(cmd.to_string()))
        } else {
            Err(Error::Context(format!(
                "unknown backend `{s}`, expected `builtin` or `exec:<cmd>`"
            )))
        }
    }
}

/// Timeout from the environment, or the default.
pub fn env_timeout() -> Duration {
    let secs = std::env::var(TIMEOUT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_TIMEOUT_SECS);
    Duration::from_secs(secs)
}

fn excerpt(s: &str) -> String {
    let s = s.trim();
    match s.char_indices().nth(400) {
        Some((k, _)) => format!("{}...", &s[..k]),
        None => s.to_string(),
    }
}

/// Sends `psi` to `sh -c cmd` and parses the quantifier-free answer.
pub fn run_external(psi: &RealFormula, cmd: &str, timeout: Option<Duration>) -> Result<RealFormula> {
    let timeout = timeout.unwrap_or_else(env_timeout);
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Backend(format!("cannot start `{cmd}`: {e}")))?;

    let request = format!("{psi}\n");
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = std::thread::spawn(move || {
        // A backend may exit without reading everything.
        let _ = stdin.write_all(request.as_bytes());
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(st)) => break st,
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::Timeout(timeout.as_secs()));
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => return Err(Error::Backend(e.to_string())),
        }
    };
    let _ = writer.join();
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::Backend(format!(
            "`{cmd}` exited with {status}: {}",
            excerpt(&err)
        )));
    }
    let result = parse_real(out.trim())
        .map_err(|e| Error::Backend(format!("unreadable backend output `{}`: {e}", excerpt(&out))))?;
    if !result.body.is_quantifier_free() {
        return Err(Error::Backend(format!(
            "backend output is not quantifier-free: {}",
            excerpt(&out)
        )));
    }
    Ok(result)
}
