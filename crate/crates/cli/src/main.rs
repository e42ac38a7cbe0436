//! `xform`: evaluate, synthesize, compare, compile and run X-form pattern
//! expressions over `.pat` and `.xf` files.
//!
//! Exit codes: 0 success (EQUIV / accepted), 1 negative verdict (DIFFER /
//! rejected), 2 parse, kind, width, file or shape errors, 3 enumeration
//! guard.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xform_core::{
    compile, parse, parse_instance_line, parse_pat, print, simplify, synth_sx_mask,
    synth_sx_singleton, synth_tx_projection, synth_x, write_pat, Dimension, Error, Interpretation,
    LengthBound, ObjectivePattern, SequenceInstance, SynthResult, XForm, DEFAULT_ENUMERATION_CAP,
};

/// Pattern-expression toolbox. Forms use the grammar
/// `BITS := #[01]+`, `!` (NOT), `.` (AND), `+` (OR), `->` (NEXT),
/// with precedence `!` > `.` > `+` > `->`; `#!` starts a comment.
/// The leftmost character of a bits literal is component 1.
#[derive(Parser)]
#[command(name = "xform", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Leaf interpretation: a leaf denotes itself alone (singleton) or every
    /// base pattern covering its 1-bits (mask).
    #[arg(long, global = true, value_enum, default_value_t = InterpArg::Singleton)]
    interp: InterpArg,

    /// Maximum sequence length for bounded comparisons.
    #[arg(long, global = true, default_value_t = 4)]
    lmax: usize,

    /// Override the cap on how many instances an enumeration may materialize.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InterpArg {
    Singleton,
    Mask,
}

impl From<InterpArg> for Interpretation {
    fn from(value: InterpArg) -> Self {
        match value {
            InterpArg::Singleton => Interpretation::Singleton,
            InterpArg::Mask => Interpretation::Mask,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthMode {
    /// Spatial form (NOT/AND/OR over leaves).
    Sx,
    /// NEXT-chain of per-position spatial forms; may be inexact.
    Tx,
    /// Length-partitioned form; always exact.
    X,
}

#[derive(Args)]
struct FormSource {
    /// Inline form text.
    #[arg(long, value_name = "TEXT")]
    form: Option<String>,

    /// Read the form from a `.xf` file (one form per file, `#!` comments).
    #[arg(long, value_name = "PATH", conflicts_with = "form")]
    form_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a form and list its denotation in `.pat` format.
    Eval {
        #[command(flatten)]
        source: FormSource,
    },
    /// Synthesize a form for the pattern in a `.pat` file.
    Synth {
        /// Target pattern file.
        #[arg(long, value_name = "PATH")]
        pattern: PathBuf,

        /// Which construction to run.
        #[arg(long, value_enum)]
        mode: SynthMode,

        /// Shrink the synthesized form (denotation-preserving).
        #[arg(long)]
        simplify: bool,
    },
    /// Decide whether two forms denote the same sequences up to --lmax.
    CheckEquiv {
        /// Inline form text; may be given twice.
        #[arg(long, value_name = "TEXT")]
        form: Vec<String>,

        /// Read a form from a `.xf` file; may be given twice. Inline forms
        /// are taken before file forms.
        #[arg(long, value_name = "PATH")]
        form_file: Vec<PathBuf>,
    },
    /// Compile a form and print machine statistics.
    Compile {
        #[command(flatten)]
        source: FormSource,
    },
    /// Run a form's machine on one input sequence and print the trace.
    Run {
        #[command(flatten)]
        source: FormSource,

        /// Input sequence as whitespace-separated bitstrings, e.g. "1 0".
        #[arg(long, value_name = "SEQ")]
        input: Option<String>,

        /// Read the input sequence from a `.pat` file holding exactly one
        /// sequence.
        #[arg(long, value_name = "PATH", conflicts_with = "input")]
        pattern: Option<PathBuf>,

        /// Print per-step suffix detection instead of the whole-sequence
        /// trace.
        #[arg(long)]
        stream: bool,
    },
}

/// Failure paths mapped to exit codes: 2 for usage, parse and shape errors,
/// 3 for the enumeration guard.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn classify(e: Error) -> Failure {
    let code = match e {
        Error::EnumerationGuard { .. } => 3,
        _ => 2,
    };
    Failure::new(code, e.to_string())
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {}", path.display(), e)))
}

fn load_form_text(source: &FormSource) -> Result<String, Failure> {
    match (&source.form, &source.form_file) {
        (Some(text), None) => Ok(text.clone()),
        (None, Some(path)) => read_file(path),
        (None, None) => Err(Failure::new(2, "either --form or --form-file is required")),
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    }
}

fn parse_form(text: &str, expected_dim: Option<Dimension>) -> Result<XForm, Failure> {
    parse(text, expected_dim).map_err(|d| Failure::new(2, d.to_string()))
}

fn load_pat(path: &PathBuf) -> Result<ObjectivePattern, Failure> {
    let text = read_file(path)?;
    parse_pat(&text).map_err(|e| Failure::new(2, format!("{}: {}", path.display(), e)))
}

fn cmd_eval(source: &FormSource, interp: Interpretation) -> Result<u8, Failure> {
    let form = parse_form(&load_form_text(source)?, None)?;
    let denotation = form.eval(interp).map_err(classify)?;
    print!("{}", write_pat(&denotation));
    Ok(0)
}

fn run_synthesis(
    target: &ObjectivePattern,
    mode: SynthMode,
    interp: Interpretation,
) -> Result<SynthResult, Error> {
    match mode {
        SynthMode::Sx => match interp {
            Interpretation::Singleton => synth_sx_singleton(target),
            Interpretation::Mask => synth_sx_mask(target, false),
        },
        SynthMode::Tx => synth_tx_projection(target, interp),
        SynthMode::X => synth_x(target, interp),
    }
}

fn cmd_synth(
    pattern: &PathBuf,
    mode: SynthMode,
    interp: Interpretation,
    shrink: bool,
) -> Result<u8, Failure> {
    let target = load_pat(pattern)?;
    let mut result = run_synthesis(&target, mode, interp).map_err(classify)?;
    if shrink {
        result.form = simplify(&result.form, interp);
        result.footing_size = result.form.footing().len();
    }
    println!("{}", print(&result.form));
    println!("#! exact={} footing={}", result.exact, result.footing_size);
    Ok(0)
}

fn cmd_check_equiv(
    forms: &[String],
    files: &[PathBuf],
    interp: Interpretation,
    lmax: usize,
    cap: u64,
) -> Result<u8, Failure> {
    let mut texts: Vec<String> = forms.to_vec();
    for path in files {
        texts.push(read_file(path)?);
    }
    if texts.len() != 2 {
        return Err(Failure::new(
            2,
            format!("check-equiv needs exactly 2 forms, got {}", texts.len()),
        ));
    }
    let a = parse_form(&texts[0], None)?;
    let b = parse_form(&texts[1], Some(a.dim()))?;
    let bound = LengthBound::with_cap(lmax, cap).map_err(classify)?;
    bound.universe_size(a.dim()).map_err(classify)?;

    let restrict = |form: &XForm| -> Result<ObjectivePattern, Failure> {
        let denotation = form.eval(interp).map_err(classify)?;
        ObjectivePattern::from_instances(
            denotation.dim(),
            denotation.iter().filter(|s| s.len() <= lmax).cloned(),
        )
        .map_err(classify)
    };
    let left = restrict(&a)?;
    let right = restrict(&b)?;
    if left == right {
        println!("EQUIV");
        Ok(0)
    } else {
        let witness = left
            .iter()
            .find(|s| !right.contains(s))
            .or_else(|| right.iter().find(|s| !left.contains(s)))
            .expect("unequal sets have a witness");
        println!("DIFFER");
        println!("{}", witness);
        Ok(1)
    }
}

fn cmd_compile(source: &FormSource, interp: Interpretation) -> Result<u8, Failure> {
    let form = parse_form(&load_form_text(source)?, None)?;
    let machine = compile(&form, interp).map_err(classify)?;
    println!("spatial_bits={}", machine.spatial_bits().len());
    println!("temporal_bits={}", machine.temporal_bits().len());
    println!("states={}", machine.state_count());
    println!("transitions={}", machine.transition_count());
    Ok(0)
}

fn load_input(
    input: &Option<String>,
    pattern: &Option<PathBuf>,
    dim: Dimension,
) -> Result<SequenceInstance, Failure> {
    match (input, pattern) {
        (Some(line), None) => {
            parse_instance_line(line, Some(dim)).map_err(|e| Failure::new(2, e.to_string()))
        }
        (None, Some(path)) => {
            let p = load_pat(path)?;
            if p.len() != 1 {
                return Err(Failure::new(
                    2,
                    format!(
                        "{}: expected exactly one sequence, found {}",
                        path.display(),
                        p.len()
                    ),
                ));
            }
            let instance = p.iter().next().expect("one instance").clone();
            Ok(instance)
        }
        (None, None) => Err(Failure::new(2, "either --input or --pattern is required")),
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    }
}

fn cmd_run(
    source: &FormSource,
    input: &Option<String>,
    pattern: &Option<PathBuf>,
    stream: bool,
    interp: Interpretation,
) -> Result<u8, Failure> {
    let form = parse_form(&load_form_text(source)?, None)?;
    let machine = compile(&form, interp).map_err(classify)?;
    let sequence = load_input(input, pattern, form.dim())?;
    if stream {
        let flags = machine.run_stream(&sequence).map_err(classify)?;
        let words: Vec<&str> = flags.iter().map(|&b| if b { "true" } else { "false" }).collect();
        println!("{}", words.join(" "));
        return Ok(0);
    }
    let trace = machine.run(&sequence).map_err(classify)?;
    print!("{}", trace);
    Ok(if trace.accepted { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<u8, Failure> {
    let interp: Interpretation = cli.interp.into();
    match &cli.command {
        Command::Eval { source } => cmd_eval(source, interp),
        Command::Synth {
            pattern,
            mode,
            simplify,
        } => cmd_synth(pattern, *mode, interp, *simplify),
        Command::CheckEquiv { form, form_file } => {
            cmd_check_equiv(form, form_file, interp, cli.lmax, cli.cap)
        }
        Command::Compile { source } => cmd_compile(source, interp),
        Command::Run {
            source,
            input,
            pattern,
            stream,
        } => cmd_run(source, input, pattern, *stream, interp),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
