//! External ∃ℝ solvers driven over newline-delimited JSON.
//!
//! Each request is one line `{"vars":[..],"equalities":[..],"disequalities":[..]}`
//! and each response one line `{"status":"sat|unsat|unknown","witness":{var: value}}`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use hyperchrom_core::embed::{ExistentialOracle, OracleAnswer, OracleQuery};
use hyperchrom_core::poly::parse_rational;
use serde::Deserialize;

use crate::format::QueryJson;

#[derive(Deserialize)]
struct Response {
    status: String,
    #[serde(default)]
    witness: BTreeMap<String, String>,
}

/// A solver process started through `sh -c`.
pub struct SubprocessOracle {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

impl SubprocessOracle {
    pub fn spawn(command: &str) -> crate::Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| crate::Error::Oracle(format!("cannot start {command:?}: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(SubprocessOracle { command: command.to_string(), child, stdin, stdout })
    }

    fn exchange(&mut self, query: &OracleQuery) -> crate::Result<OracleAnswer> {
        let fail = |m: String| crate::Error::Oracle(m);
        let mut line = serde_json::to_string(&QueryJson::from_query(query))?;
        line.push('\n');
        let stdin = self.stdin.as_mut().ok_or_else(|| fail("oracle input is closed".into()))?;
        stdin.write_all(line.as_bytes()).and_then(|_| stdin.flush()).map_err(|e| fail(format!("writing to oracle: {e}")))?;
        let mut reply = String::new();
        let n = self.stdout.read_line(&mut reply).map_err(|e| fail(format!("reading from oracle: {e}")))?;
        if n == 0 {
            return Err(fail("oracle closed its output".into()));
        }
        let r: Response = serde_json::from_str(&reply).map_err(|e| fail(format!("malformed oracle reply: {e}")))?;
        match r.status.as_str() {
            "sat" => {
                let values = query
                    .vars
                    .iter()
                    .map(|v| {
                        let s = r.witness.get(v).ok_or_else(|| fail(format!("witness lacks {v}")))?;
                        Ok(parse_rational(s)?)
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                Ok(OracleAnswer::Sat(values))
            }
            "unsat" => Ok(OracleAnswer::Unsat),
            "unknown" => Ok(OracleAnswer::Unknown),
            other => Err(fail(format!("unknown oracle status {other:?}"))),
        }
    }
}

impl ExistentialOracle for SubprocessOracle {
    fn backend_id(&self) -> String {
        format!("subprocess:{}", self.command)
    }

    fn solve(&mut self, query: &OracleQuery) -> hyperchrom_core::Result<OracleAnswer> {
        self.exchange(query).map_err(|e| hyperchrom_core::Error::Unsupported(e.to_string()))
    }
}

impl Drop for SubprocessOracle {
    fn drop(&mut self) {
        // closing stdin lets a well-behaved solver exit on its own
        self.stdin.take();
        let _ = self.child.wait();
    }
}
