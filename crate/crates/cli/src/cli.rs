//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{load_config, parse_j_list, ConfigFile, Experiment};
use crate::output::write_outputs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Parser)]
#[command(name = "usbp-dg", version, about = "DG-USBP experiment driver")]
pub struct Cli {
    pub experiment: Experiment,
    /// JSON file with configuration keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Nodes per element and direction.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Dissipation parameter λ_N (≤ 0).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub splitting: Option<String>,
    /// Element counts, `16,64` or a doubling range `2..128`.
    #[arg(long = "J", value_parser = parse_j_list)]
    pub j: Option<std::vec::Vec<usize>>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random states per element count (local stability).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Geometry degrees (free stream), e.g. `1,2,3,4`.
    #[arg(long = "n-geo", value_parser = parse_j_list)]
    pub n_geo: Option<std::vec::Vec<usize>>,
    /// Warping amplitude (free stream).
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Run independent combinations in parallel.
    #[arg(long)]
    pub parallel: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    pub fn overrides(&self) -> ConfigFile {
        ConfigFile {
            experiment: Some(self.experiment),
            n: self.n,
            lambda: self.lambda,
            splitting: self.splitting.clone(),
            j: self.j.clone(),
            cfl: self.cfl,
            t_end: self.t_end,
            seed: self.seed,
            samples: self.samples,
            n_geo: self.n_geo.clone(),
            amplitude: self.amplitude,
            parallel: self.parallel.then_some(true),
            out: self.out.clone(),
        }
    }
}

/// Run the command line `args` and return the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match load_config(cli.config.as_deref(), cli.overrides()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "usbp-dg: {e}");
            return EXIT_USAGE;
        }
    };
    match crate::run(&cfg).and_then(|out| write_outputs(&cfg, &out, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "usbp-dg: {e}");
            EXIT_INTERNAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(
            std::iter::once("usbp-dg").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn negative_lambda_and_lists_parse() {
        let cli =
            Cli::try_parse_from(["usbp-dg", "spectrum", "--lambda", "-1e-2", "--J", "8"]).unwrap();
        assert_eq!(cli.lambda, Some(-1e-2));
        assert_eq!(cli.j, Some(vec![8]));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["no-such-experiment"]).0, EXIT_USAGE);
        assert_eq!(run(&["spectrum", "--lambda", "1"]).0, EXIT_USAGE);
        assert_eq!(run(&["spectrum", "--J", "x"]).0, EXIT_USAGE);
        let (code, _, err) = run(&["spectrum", "--config", "/nonexistent/cfg.json"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("config"));
    }

    #[test]
    fn operator_dump_to_stdout() {
        let (code, out, _) = run(&["operator-dump", "--N", "3"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["N"], 3);
        assert_eq!(v["meta"]["config"]["experiment"], "operator-dump");
    }
}
