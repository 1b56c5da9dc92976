use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toric_artin::io::{self as fanio, FanFile};
use toric_artin::{
    euler_artin, euler_artin_3d, integrate_artin, simplicialize, sr_presentation, ChowClass, ChowRing, ErrorKind,
    StackyFan, ValidationReport,
};

mod render;

/// Exact intersection numbers and Euler characteristics of toric Artin stacks.
#[derive(Debug, Parser)]
#[command(name = "toric-artin", version)]
struct Cli {
    /// Emit a JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the fan axioms and summarize the fan.
    Validate { fan: PathBuf },
    /// Show completeness, simpliciality and the multiplicity of every maximal cone.
    Info { fan: PathBuf },
    /// Stacky star subdivision at one cone.
    Subdivide {
        fan: PathBuf,
        /// Ray indices of the cone, e.g. `0,1,2,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        cone: Vec<usize>,
        /// Write the subdivided fan here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Subdivide until simplicial; prints the steps and the pullback of every generator.
    Simplicialize {
        fan: PathBuf,
        /// Write the simplicial fan (with its subdivision history) here.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the step and pullback report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Linear relations and minimal nonfaces of the Stanley–Reisner presentation.
    Sr { fan: PathBuf },
    /// Rewrite a class as a combination of square-free monomials.
    Reduce { fan: PathBuf, class: String },
    /// Degree of a top-degree class.
    Integrate { fan: PathBuf, class: String },
    /// Euler characteristic of the toric stack.
    Euler {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Simplicial formula when the fan is simplicial, pullback otherwise.
    Auto,
    /// Sum of 1/D over maximal cones; needs a simplicial fan.
    Simplicial,
    /// Integrate the top Chern class over the simplicialization.
    Pullback,
    /// Closed form for rank 3, with an itemized correction report.
    Formula3d,
}

enum Failure {
    Core(toric_artin::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl From<toric_artin::Error> for Failure {
    fn from(e: toric_artin::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e.kind() {
                ErrorKind::Invalid => 1,
                ErrorKind::Precondition => 2,
                ErrorKind::Internal => 4,
            },
            Failure::Io { .. } => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io { path, source } => format!("{}: {source}", path.display()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

fn load(path: &Path) -> Result<(FanFile, StackyFan), Failure> {
    let file = FanFile::parse(&read(path)?)?;
    let fan = file.to_fan()?;
    Ok((file, fan))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let json = cli.json;
    let out = match &cli.command {
        Command::Validate { fan } => {
            let (_, fan) = load(fan)?;
            let report = ValidationReport::of(&fan);
            if json {
                fanio::validation_json(&report).to_string()
            } else {
                render::validation(&report)
            }
        }
        Command::Info { fan } => {
            let (file, fan) = load(fan)?;
            let info = render::Info::of(&file, &fan)?;
            if json {
                info.json().to_string()
            } else {
                info.text()
            }
        }
        Command::Subdivide { fan: path, cone, output } => {
            let (file, fan) = load(path)?;
            let mut cone = cone.clone();
            cone.sort_unstable();
            let (sub, _) = fan.star_subdivide(&cone)?;
            let n = fan.num_rays();
            let step = toric_artin::SubdivisionStep { cone, new_ray_index: n, new_ray: sub.ray(n).to_vec() };
            let out_file = render::derived_file(&file, &sub, std::slice::from_ref(&step))?;
            match output {
                Some(p) => {
                    write(p, &with_newline(out_file.to_json()))?;
                    render::subdivision_summary(&step, json)
                }
                None => out_file.to_json(),
            }
        }
        Command::Simplicialize { fan: path, output, report } => {
            let (file, fan) = load(path)?;
            let simp = simplicialize(&fan)?;
            let doc = fanio::simplicialization_json(&simp);
            if let Some(p) = output {
                write(p, &with_newline(render::derived_file(&file, &simp.target, &simp.steps)?.to_json()))?;
            }
            if let Some(p) = report {
                write(p, &with_newline(serde_json::to_string_pretty(&doc).expect("reports serialize")))?;
            }
            if json {
                doc.to_string()
            } else {
                render::simplicialization(&simp)
            }
        }
        Command::Sr { fan } => {
            let (_, fan) = load(fan)?;
            let sr = sr_presentation(&fan);
            render::sr(&sr, fan.num_rays(), json)
        }
        Command::Reduce { fan, class } => {
            let (_, fan) = load(fan)?;
            let class = ChowClass::parse(class, fan.num_rays())?;
            let reduced = ChowRing::new(&fan)?.reduce_squarefree(&class)?;
            render::value("class", &reduced.to_string(), json)
        }
        Command::Integrate { fan, class } => {
            let (_, fan) = load(fan)?;
            let class = ChowClass::parse(class, fan.num_rays())?;
            render::value("value", &integrate_artin(&fan, &class)?.to_string(), json)
        }
        Command::Euler { fan, method } => {
            let (_, fan) = load(fan)?;
            match method {
                Method::Simplicial => render::value("value", &ChowRing::new(&fan)?.euler().to_string(), json),
                Method::Pullback => render::value("value", &euler_artin(&fan)?.to_string(), json),
                Method::Auto if fan.is_simplicial() => {
                    render::value("value", &ChowRing::new(&fan)?.euler().to_string(), json)
                }
                Method::Auto => render::value("value", &euler_artin(&fan)?.to_string(), json),
                Method::Formula3d => {
                    let report = euler_artin_3d(&fan)?;
                    if json {
                        fanio::euler3d_json(&report).to_string()
                    } else {
                        render::euler3d(&report)
                    }
                }
            }
        }
    };
    Ok(with_newline(out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
