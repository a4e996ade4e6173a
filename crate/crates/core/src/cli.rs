//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.
//!
//! Real arguments use the expression grammar of [`crate::expr`] (for example
//! `sqrt(2)`, `liouville(10) + 1/3`), polynomials the grammar of
//! [`crate::poly`], and maps the spec language of [`crate::catalog`].
//! Interval endpoints are rational literals such as `1/10` or `0.25`.
//!
//! Exit status: 0 on success, 1 on a domain error (diagnostic
//! `error: <Token>: <message>` on stderr), 2 on a usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::CatalogMap;
use crate::certfile::CertificateFile;
use crate::cfrac::{cf_expand, convergents, maillet_root_witnesses};
use crate::decompose::{self, PairSplit};
use crate::error::{Error, Result};
use crate::expindep::{self, DependenceWitness};
use crate::expr::parse_real;
use crate::interval::Interval;
use crate::liouville::{certify_level, series_constant, DigitRule, Schedule};
use crate::poly::{BivarPolyQ, PolyQ};
use crate::rational::{self, parse_rational};
use crate::real::ExactReal;
use crate::steer::steer;

#[derive(Parser, Debug)]
#[command(
    name = "liouville",
    version,
    about = "Certified Liouville numbers and exponential independence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a series constant sum a_k b^-e_k and optionally certify it.
    Construct {
        #[arg(long, default_value_t = 10)]
        base: u32,
        /// factorial, double-exponential, or list:E1,E2,...
        #[arg(long, default_value = "factorial")]
        schedule: String,
        /// A digit, or periodic:D1,D2,...
        #[arg(long, default_value = "1")]
        digits: String,
        /// Also emit a certificate to this level.
        #[arg(long)]
        level: Option<u32>,
        /// Decimal digits to print.
        #[arg(long, default_value_t = 40)]
        show: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Certify a real expression to a level.
    Certify {
        x: String,
        #[arg(long)]
        level: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file.
    Verify { file: PathBuf },
    /// Split T = xi + eta into Liouville numbers.
    SplitSum {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        level: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Split T = xi * eta into Liouville numbers.
    SplitProd {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        level: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Steer a point so that it and all its images are certified.
    Steer {
        #[arg(long = "map")]
        maps: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
        interval: Vec<String>,
        #[arg(long)]
        level: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// A certified pair on the curve P(x, y) = 0.
    ImplicitPair {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        level: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        x_interval: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        y_interval: Option<Vec<String>>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Certify phi^k(xi) for |k| <= depth.
    Orbit {
        #[arg(long)]
        map: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        level: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        interval: Option<Vec<String>>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Certified continued fraction and convergents.
    Cfrac {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Convergent indices whose numerator and denominator are both p-th powers.
    MailletRoot {
        x: String,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        depth: usize,
    },
    /// Decide independence of exp(g_1), .., exp(g_n).
    Expindep {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
    /// Integer-coordinate basis of the exponents modulo constants.
    ExponentBasis {
        #[arg(required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
    /// P(F(x, y)) for a minimal polynomial P and a bivariate F.
    Burger {
        #[arg(long)]
        minpoly: String,
        #[arg(long)]
        compose: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Linear,
    Algebraic,
}

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        // The reader went away; nothing left to report to.
        Err(Error::InvalidArgument(m)) if m == BROKEN_PIPE => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.token());
            1
        }
    }
}

const BROKEN_PIPE: &str = "i/o: broken pipe";

fn io_err(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        return Error::InvalidArgument(BROKEN_PIPE.into());
    }
    Error::InvalidArgument(format!("i/o: {e}"))
}

fn interval_arg(v: &[String]) -> Result<Interval> {
    let (lo, hi) = (parse_rational(&v[0])?, parse_rational(&v[1])?);
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "interval needs LO < HI, got {lo} {hi}"
        )));
    }
    Interval::new(lo, hi)
}

fn schedule_arg(s: &str) -> Result<Schedule> {
    match s {
        "factorial" => Ok(Schedule::Factorial),
        "double-exponential" => Ok(Schedule::DoubleExponential),
        _ => {
            let list = s
                .strip_prefix("list:")
                .ok_or_else(|| Error::Parse(format!("unknown schedule {s:?}")))?;
            let values = list
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad exponent {v:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Schedule::List { values })
        }
    }
}

fn digits_arg(s: &str) -> Result<DigitRule> {
    let num = |v: &str| {
        v.trim()
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad digit {v:?}")))
    };
    match s.strip_prefix("periodic:") {
        Some(list) => Ok(DigitRule::Periodic {
            values: list.split(',').map(num).collect::<Result<_>>()?,
        }),
        None => Ok(DigitRule::Constant { value: num(s)? }),
    }
}

fn emit(file: CertificateFile, dest: &Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    let text = file.to_json();
    match dest {
        Some(path) => {
            fs::write(path, text + "\n").map_err(io_err)?;
            writeln!(
                out,
                "wrote {} ({} subjects)",
                path.display(),
                file.subjects.len()
            )
            .map_err(io_err)
        }
        None => writeln!(out, "{text}").map_err(io_err),
    }
}

fn pair_file(s: &PairSplit) -> Result<CertificateFile> {
    let subjects = vec![
        CertificateFile::subject(Some("xi"), &s.xi, &s.certs.0)?,
        CertificateFile::subject(Some("eta"), &s.eta, &s.certs.1)?,
    ];
    Ok(CertificateFile::new(subjects).with_log(s.log.clone()))
}

fn decimal(x: &ExactReal, digits: usize) -> String {
    let bits = (digits as f64 * 3.33) as u32 + 8;
    rational::to_decimal(&x.refine(bits).mid(), digits)
}

fn polys(texts: &[String]) -> Result<Vec<PolyQ>> {
    texts.iter().map(|t| PolyQ::parse(t)).collect()
}

fn write_line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(io_err)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Construct {
            base,
            schedule,
            digits,
            level,
            show,
            out: dest,
        } => {
            let x = series_constant(base, schedule_arg(&schedule)?, digits_arg(&digits)?)?;
            match level {
                None => write_line(out, decimal(&x, show)),
                Some(n) => {
                    let cert = certify_level(&x, n)?;
                    let file =
                        CertificateFile::new(vec![CertificateFile::subject(Some("x"), &x, &cert)?]);
                    emit(file, &dest, out)
                }
            }
        }
        Command::Certify {
            x,
            level,
            out: dest,
        } => {
            let v = parse_real(&x)?;
            let cert = certify_level(&v, level)?;
            emit(
                CertificateFile::new(vec![CertificateFile::subject(Some("x"), &v, &cert)?]),
                &dest,
                out,
            )
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(&file).map_err(io_err)?;
            let cert = CertificateFile::from_json(&text)?;
            let report = cert.verify()?;
            for (i, r) in report.iter().enumerate() {
                let name = r.label.clone().unwrap_or_else(|| format!("subject {i}"));
                write_line(out, format!("{name}: verified to level {}", r.level))?;
            }
            write_line(out, "ok")
        }
        Command::SplitSum {
            t,
            level,
            out: dest,
        } => {
            let s = decompose::erdos_split_sum(&parse_real(&t)?, level)?;
            emit(pair_file(&s)?, &dest, out)
        }
        Command::SplitProd {
            t,
            level,
            out: dest,
        } => {
            let s = decompose::erdos_split_prod(&parse_real(&t)?, level)?;
            emit(pair_file(&s)?, &dest, out)
        }
        Command::Steer {
            maps,
            interval,
            level,
            out: dest,
        } => {
            let built = maps
                .iter()
                .map(|m| CatalogMap::parse(m))
                .collect::<Result<Vec<_>>>()?;
            let run = steer(&built, &interval_arg(&interval)?, level)?;
            let mut subjects = Vec::new();
            for (i, (v, c)) in run.images.iter().zip(&run.certificates).enumerate() {
                let label = if i == 0 {
                    "point".to_string()
                } else {
                    format!("image {i}: {}", maps[i - 1])
                };
                subjects.push(CertificateFile::subject(Some(&label), v, c)?);
            }
            emit(
                CertificateFile::new(subjects).with_log(Some(run.log)),
                &dest,
                out,
            )
        }
        Command::ImplicitPair {
            poly,
            level,
            x_interval,
            y_interval,
            out: dest,
        } => {
            let p = BivarPolyQ::parse(&poly)?;
            let i = x_interval
                .map(|v| interval_arg(&v))
                .transpose()?
                .unwrap_or_else(decompose::default_orbit_interval);
            let j = y_interval
                .map(|v| interval_arg(&v))
                .transpose()?
                .unwrap_or_else(decompose::default_orbit_interval);
            let s = decompose::implicit_pair(&p, &i, &j, level)?;
            emit(pair_file(&s)?, &dest, out)
        }
        Command::Orbit {
            map,
            depth,
            level,
            interval,
            out: dest,
        } => {
            let phi = CatalogMap::parse(&map)?;
            let iv = interval
                .map(|v| interval_arg(&v))
                .transpose()?
                .unwrap_or_else(decompose::default_orbit_interval);
            let o = decompose::orbit_construct_on(&phi, depth, level, &iv)?;
            let mut subjects = Vec::new();
            for k in -(depth as i64)..=depth as i64 {
                let label = format!("phi^{k}");
                let v = o.element(k).expect("in range");
                subjects.push(CertificateFile::subject(
                    Some(&label),
                    v,
                    o.certificate(k).expect("in range"),
                )?);
            }
            emit(
                CertificateFile::new(subjects).with_log(Some(o.log)),
                &dest,
                out,
            )
        }
        Command::Cfrac { x, depth } => {
            let cf = cf_expand(&parse_real(&x)?, depth)?;
            let tag = if cf.terminated {
                "terminated"
            } else {
                "truncated"
            };
            write_line(out, format!("{cf} ({tag})"))?;
            for (k, (p, q)) in convergents(&cf).iter().enumerate() {
                write_line(out, format!("{k}: {p}/{q}"))?;
            }
            Ok(())
        }
        Command::MailletRoot { x, power, depth } => {
            let idx = maillet_root_witnesses(&parse_real(&x)?, power, depth)?;
            let list: Vec<String> = idx.iter().map(usize::to_string).collect();
            write_line(out, format!("[{}]", list.join(", ")))
        }
        Command::Expindep { mode, polys: texts } => {
            let ps = polys(&texts)?;
            let v = match mode {
                Mode::Linear => expindep::lin_indep_exp(&ps),
                Mode::Algebraic => expindep::alg_indep_exp(&ps),
            };
            match &v.witness {
                None => write_line(out, "independent"),
                Some(DependenceWitness::Pair(i, j)) => {
                    write_line(out, format!("dependent: g{i} - g{j} is constant"))
                }
                Some(DependenceWitness::Relation(rel)) => {
                    let a: Vec<String> = rel.a.iter().map(|x| x.to_string()).collect();
                    write_line(
                        out,
                        format!("dependent: a = ({}), c = {}", a.join(", "), rel.c),
                    )?;
                    write_line(out, expindep::monomial_certificate(&ps, rel)?)
                }
            }
        }
        Command::ExponentBasis { polys: texts } => {
            let eb = expindep::exponent_basis(&polys(&texts)?);
            write_line(out, serde_json::to_string_pretty(&eb).expect("serializes"))
        }
        Command::Burger { minpoly, compose } => {
            let a = expindep::burger_annihilator(
                &PolyQ::parse(&minpoly)?,
                &BivarPolyQ::parse(&compose)?,
            )?;
            write_line(out, a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["liouville"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(go(&[]).0, 2);
        assert_eq!(go(&["certify"]).0, 2);
        assert_eq!(go(&["expindep", "--mode", "sideways", "z"]).0, 2);
        assert_eq!(go(&["--help"]).0, 0);
    }

    #[test]
    fn domain_errors_exit_1() {
        let (code, _, err) = go(&["certify", "sqrt(-1)", "--level", "1"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: DomainError:"), "{err}");
        let (code, _, err) = go(&["burger", "--minpoly", "0", "--compose", "x"]);
        assert_eq!((code, err.contains("ZeroP")), (1, true));
    }

    #[test]
    fn expindep_output() {
        let (code, out, _) = go(&["expindep", "--mode", "algebraic", "z", "z^2", "z^3"]);
        assert_eq!((code, out.trim()), (0, "independent"));
        let (_, out, _) = go(&["expindep", "--mode", "algebraic", "z", "2z"]);
        assert!(
            out.contains("a = (2, -1)") && out.contains("X1^2 = X2"),
            "{out}"
        );
        let (_, out, _) = go(&["expindep", "--mode", "linear", "z^2", "z^2 + 1"]);
        assert!(out.contains("g1 - g2"), "{out}");
    }

    #[test]
    fn cfrac_and_burger() {
        let (_, out, _) = go(&["cfrac", "355/113", "--depth", "10"]);
        assert!(out.starts_with("[3; 7, 16] (terminated)"), "{out}");
        let (_, out, _) = go(&["burger", "--minpoly", "z^2 - 2", "--compose", "x + y"]);
        assert_eq!(
            out.trim(),
            BivarPolyQ::parse("x^2 + 2xy + y^2 - 2")
                .unwrap()
                .to_string()
        );
    }

    #[test]
    fn schedule_and_digit_args() {
        assert_eq!(
            schedule_arg("list:1,3,9").unwrap(),
            Schedule::List {
                values: vec![1, 3, 9]
            }
        );
        assert!(schedule_arg("cubic").is_err());
        assert_eq!(
            digits_arg("periodic:1,2").unwrap(),
            DigitRule::Periodic { values: vec![1, 2] }
        );
        let (code, _, err) = go(&["construct", "--digits", "0", "--level", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("InvalidSchedule"), "{err}");
    }
}
