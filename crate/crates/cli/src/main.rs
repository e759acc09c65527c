use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::Cli;

/// Exit code for an error of the core library.
fn exit_code(e: &fekete_core::Error) -> u8 {
    use fekete_core::Error::*;
    match e {
        InvalidInput(_) | Parse(_) => 2,
        Refused(_) => 3,
        BudgetExceeded(_) => 4,
        _ => 1,
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<fekete_core::Error> for Failure {
    fn from(e: fekete_core::Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into() }
    }

    pub fn refused(msg: impl Into<String>) -> Self {
        Failure { code: 3, message: msg.into() }
    }
}

fn write_outputs(dir: &PathBuf, files: &[(String, String)]) -> Result<Vec<String>, Failure> {
    let io = |e: std::io::Error| Failure {
        code: 1,
        message: format!("cannot write to {}: {e}", dir.display()),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io)?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // a pool built earlier is only possible in tests; ignore that case
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let result = commands::run(&cli).and_then(|out| {
        let written = write_outputs(&cli.output_dir, &out.files)?;
        Ok((out, written))
    });
    match result {
        Ok((out, written)) => {
            let mut summary = serde_json::json!({
                "command": name,
                "status": "ok",
                "outputs": written,
            });
            if let (Some(map), serde_json::Value::Object(extra)) = (summary.as_object_mut(), out.summary) {
                map.extend(extra);
            }
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let status = match f.code {
                3 => "refused",
                4 => "budget_exceeded",
                2 => "invalid",
                _ => "error",
            };
            println!(
                "{}",
                serde_json::json!({
                    "command": name,
                    "status": status,
                    "exit_code": f.code,
                    "message": f.message,
                })
            );
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
