use std::fs;
use std::io::{self, Write as _};
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use azed_core::{
    compile_pattern, default_registry, evaluate, export_score, layout, layout_document, load_registry, offset_of,
    parse_piece, piece_lines, to_svg, Expression, Registry, SigningScore,
};
use clap::{Parser, Subcommand};

/// Check, render, score and search AZee documents (one expression per line).
#[derive(Parser)]
#[command(name = "azed", version)]
struct Cli {
    /// Rule registry to use instead of the built-in default.
    #[arg(long, global = true, value_name = "FILE")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check every line of every file.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Write the planar script of a piece, or of the whole document, as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        piece: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the signing score of a piece, or of all pieces in sequence.
    Score {
        file: PathBuf,
        #[arg(long)]
        piece: Option<usize>,
    },
    /// Print `piece:path` for every match of a pattern, in reading order.
    Query { file: PathBuf, pattern: String },
    /// Validate a registry file.
    RegistryCheck {
        file: PathBuf,
        /// Also print the registry in canonical form.
        #[arg(long)]
        print: bool,
    },
    /// Serve documents over HTTP.
    Serve {
        #[arg(long, default_value = "azed-store")]
        store: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
    },
}

/// Exit statuses.
const INPUT: u8 = 1;
const EVALUATION: u8 = 2;
const IO: u8 = 3;

struct Failure {
    code: u8,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: u8, line: impl Into<String>) -> Failure {
        Failure {
            code,
            lines: vec![line.into()],
        }
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn registry(path: Option<&FsPath>) -> Result<Registry, Failure> {
    match path {
        None => Ok(default_registry()),
        Some(p) => load_registry(&read(p)?)
            .map_err(|e| Failure::new(INPUT, format!("{}:{}: {}", p.display(), e.line, e.kind))),
    }
}

/// A parsed document with the source line of each piece.
struct Doc {
    pieces: Vec<Expression>,
    lines: Vec<(usize, String)>,
}

fn load(reg: &Registry, path: &FsPath) -> Result<Doc, Failure> {
    let text = read(path)?;
    let mut doc = Doc {
        pieces: Vec::new(),
        lines: Vec::new(),
    };
    let mut errors = Vec::new();
    for (line, src) in piece_lines(&text) {
        match parse_piece(reg, src) {
            Ok(e) => {
                doc.pieces.push(e);
                doc.lines.push((line, src.to_string()));
            }
            Err((offset, message)) => errors.push(format!("{}:{line}:{offset}: {message}", path.display())),
        }
    }
    if errors.is_empty() {
        Ok(doc)
    } else {
        Err(Failure {
            code: INPUT,
            lines: errors,
        })
    }
}

fn pick(doc: &Doc, path: &FsPath, piece: usize) -> Result<(), Failure> {
    if piece >= doc.pieces.len() {
        return Err(Failure::new(
            INPUT,
            format!("{}: no piece {piece} (document has {})", path.display(), doc.pieces.len()),
        ));
    }
    Ok(())
}

fn write_out(out: Option<&FsPath>, text: &str) -> Result<(), Failure> {
    let result = match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    result.map_err(|m| Failure::new(IO, m))
}

fn score_of(reg: &Registry, doc: &Doc, path: &FsPath, i: usize) -> Result<SigningScore, Failure> {
    evaluate(reg, &doc.pieces[i]).map_err(|e| {
        let (line, src) = &doc.lines[i];
        let offset = offset_of(src, e.path()).unwrap_or(0);
        Failure::new(EVALUATION, format!("{}:{line}:{offset}: {e}", path.display()))
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let reg = registry(cli.registry.as_deref())?;
    match cli.command {
        Command::Check { files } => {
            let mut worst: Option<Failure> = None;
            for f in &files {
                if let Err(fail) = load(&reg, f) {
                    let merged = match worst.take() {
                        None => fail,
                        Some(mut w) => {
                            w.code = w.code.max(fail.code);
                            w.lines.extend(fail.lines);
                            w
                        }
                    };
                    worst = Some(merged);
                }
            }
            worst.map_or(Ok(()), Err)
        }
        Command::Render { file, piece, out } => {
            let doc = load(&reg, &file)?;
            let scene = match piece {
                Some(i) => {
                    pick(&doc, &file, i)?;
                    layout(&reg, &doc.pieces[i])
                }
                None => layout_document(&reg, &doc.pieces),
            };
            write_out(out.as_deref(), &to_svg(&scene))
        }
        Command::Score { file, piece } => {
            let doc = load(&reg, &file)?;
            let score = match piece {
                Some(i) => {
                    pick(&doc, &file, i)?;
                    score_of(&reg, &doc, &file, i)?
                }
                None => {
                    let mut all = SigningScore::empty();
                    for i in 0..doc.pieces.len() {
                        all = all.seq(&score_of(&reg, &doc, &file, i)?);
                    }
                    all
                }
            };
            write_out(None, &export_score(&score))
        }
        Command::Query { file, pattern } => {
            let pat = compile_pattern(&pattern).map_err(|e| Failure::new(INPUT, format!("pattern: {e}")))?;
            let doc = load(&reg, &file)?;
            let d = azed_core::Document::new(&reg, file.display().to_string(), doc.pieces)
                .map_err(|e| Failure::new(INPUT, e.to_string()))?;
            let text: String = d
                .query(&pat)
                .iter()
                .map(|m| format!("{}:{}\n", m.piece, m.path))
                .collect();
            write_out(None, &text)
        }
        Command::RegistryCheck { file, print } => {
            let checked = registry(Some(&file))?;
            if print {
                write_out(None, &azed_core::print_registry(&checked))?;
            }
            Ok(())
        }
        Command::Serve { store, listen } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::new(IO, e.to_string()))?;
            let config = azed_service::Config {
                registry: reg,
                store,
                listen,
            };
            rt.block_on(azed_service::serve(config, |addr| {
                eprintln!("listening on http://{addr}");
            }))
            .map_err(|e| Failure::new(IO, format!("serve: {e}")))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            for line in &f.lines {
                eprintln!("{line}");
            }
            ExitCode::from(f.code)
        }
    }
}
