//! JSON files: instances, solutions and solve reports.
//!
//! Numbers travel as strings so rationals keep their exact value and floats
//! their shortest round-trip spelling.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::report::SolveReport;
use crate::scalar::{parse_rational, ModeKind, NumericMode, Scalar};

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: u32,
    k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<ModeKind>,
    sums: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

/// How to pick the field when reading an instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModeChoice {
    /// The file's `mode` key if present, else rational when every sum parses
    /// as an integer or `p/q`.
    #[default]
    Auto,
    Rational,
    Float,
}

/// An instance over whichever field was chosen at read time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyInstance {
    Exact(Instance<BigRational>),
    Float(Instance<f64>),
}

impl AnyInstance {
    pub fn kind(&self) -> ModeKind {
        match self {
            AnyInstance::Exact(_) => ModeKind::Rational,
            AnyInstance::Float(_) => ModeKind::Float,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            AnyInstance::Exact(i) => i.n,
            AnyInstance::Float(i) => i.n,
        }
    }

    pub fn k(&self) -> u32 {
        match self {
            AnyInstance::Exact(i) => i.k,
            AnyInstance::Float(i) => i.k,
        }
    }
}

pub fn instance_to_string<S: Scalar>(instance: &Instance<S>) -> Result<String> {
    let file = InstanceFile {
        n: instance.n,
        k: instance.k,
        mode: Some(S::KIND),
        sums: instance.sums().iter().map(Scalar::to_canonical).collect(),
        warnings: instance.warnings.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

pub fn write_instance<S: Scalar>(path: impl AsRef<Path>, instance: &Instance<S>) -> Result<()> {
    fs::write(path, instance_to_string(instance)?)?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>, choice: ModeChoice) -> Result<AnyInstance> {
    parse_instance(&fs::read_to_string(path)?, choice)
}

pub fn parse_instance(text: &str, choice: ModeChoice) -> Result<AnyInstance> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::MalformedInstance(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let kind = match choice {
        ModeChoice::Rational => ModeKind::Rational,
        ModeChoice::Float => ModeKind::Float,
        ModeChoice::Auto => file.mode.unwrap_or_else(|| {
            if file.sums.iter().all(|s| parse_rational(s).is_ok()) {
                ModeKind::Rational
            } else {
                ModeKind::Float
            }
        }),
    };
    Ok(match kind {
        ModeKind::Rational => AnyInstance::Exact(build(&file, NumericMode::exact(), parse_exact)?),
        ModeKind::Float => AnyInstance::Float(build(&file, NumericMode::float(), f64::parse)?),
    })
}

fn build<S: Scalar>(file: &InstanceFile, mode: NumericMode, parse: impl Fn(&str) -> Result<S>) -> Result<Instance<S>> {
    let sums = file
        .sums
        .iter()
        .enumerate()
        .map(|(i, s)| parse(s).map_err(|e| Error::MalformedInstance(format!("sums[{i}]: {e}"))))
        .collect::<Result<Vec<S>>>()?;
    Ok(Instance::new(file.n, file.k, mode, sums)?.with_warnings(file.warnings.clone()))
}

/// Integers, `p/q`, and finite decimals such as `-1.25` or `3e-2`, all read
/// exactly.
pub fn parse_exact(s: &str) -> Result<BigRational> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let t = s.trim();
    let err = || Error::Parse { value: t.to_string(), expected: "exact decimal" };
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.bytes().chain(frac.bytes())).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{int}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    elements: Vec<String>,
}

pub fn solution_to_string<S: Scalar>(solution: &Solution<S>) -> Result<String> {
    let file = SolutionFile { elements: solution.elements.iter().map(Scalar::to_canonical).collect() };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

pub fn write_solution<S: Scalar>(path: impl AsRef<Path>, solution: &Solution<S>) -> Result<()> {
    fs::write(path, solution_to_string(solution)?)?;
    Ok(())
}

/// Reads a solution file into the field `S`.
pub fn read_solution<S: Scalar>(path: impl AsRef<Path>) -> Result<Solution<S>> {
    parse_solution(&fs::read_to_string(path)?)
}

pub fn parse_solution<S: Scalar>(text: &str) -> Result<Solution<S>> {
    let file: SolutionFile = serde_json::from_str(text)
        .map_err(|e| Error::MalformedInstance(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let elements = file
        .elements
        .iter()
        .enumerate()
        .map(|(i, s)| parse_exact_scalar(s).map_err(|e| Error::MalformedInstance(format!("elements[{i}]: {e}"))))
        .collect::<Result<Vec<S>>>()?;
    Ok(Solution::new(elements))
}

fn parse_exact_scalar<S: Scalar>(s: &str) -> Result<S> {
    if S::EXACT {
        parse_exact(s).map(|r| S::from_rational(&r))
    } else {
        S::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoserEntry {
    pub u: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoserFile {
    pub k: u32,
    pub values: Vec<MoserEntry>,
    pub singular_us: Vec<u32>,
}

/// The on-disk report. Field order is the printed order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub status: String,
    pub algorithm: String,
    pub n: u32,
    pub k: u32,
    pub mode: ModeKind,
    pub solutions: Vec<Vec<String>>,
    pub moser: MoserFile,
    pub verification: Vec<String>,
    pub warnings: Vec<String>,
    /// Wall-clock seconds.
    pub elapsed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
}

impl ReportFile {
    pub fn from_report<S: Scalar>(report: &SolveReport<S>) -> Self {
        let canon = |v: &[S]| v.iter().map(Scalar::to_canonical).collect::<Vec<_>>();
        ReportFile {
            status: report.status.as_str().to_string(),
            algorithm: match report.algorithm {
                crate::report::Algorithm::Vieta => "vieta".into(),
                crate::report::Algorithm::Brute => "brute".into(),
            },
            n: report.n,
            k: report.k,
            mode: report.mode.kind,
            solutions: report.solutions.iter().map(|s| canon(s)).collect(),
            moser: MoserFile {
                k: report.moser.k,
                values: report
                    .moser
                    .values
                    .iter()
                    .map(|(u, v)| MoserEntry { u: *u, value: v.to_string() })
                    .collect(),
                singular_us: report.moser.singular_us.clone(),
            },
            verification: canon(&report.verification),
            warnings: report.warnings.clone(),
            elapsed: report.elapsed.as_secs_f64(),
            iterations: report.iterations,
        }
    }

    /// The solutions parsed back into a field.
    pub fn solutions_as<S: Scalar>(&self) -> Result<Vec<Vec<S>>> {
        self.solutions
            .iter()
            .map(|s| s.iter().map(|v| parse_exact_scalar(v)).collect())
            .collect()
    }
}

pub fn report_to_string<S: Scalar>(report: &SolveReport<S>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ReportFile::from_report(report))? + "\n")
}

pub fn write_report<S: Scalar>(path: impl AsRef<Path>, report: &SolveReport<S>) -> Result<()> {
    fs::write(path, report_to_string(report)?)?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ReportFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, Distribution};
    use crate::vieta::{solve_vieta, VietaOptions};

    #[test]
    fn instance_round_trip_is_byte_identical() {
        let (inst, _) =
            generate_instance::<BigRational>(6, 3, 7, Distribution::IntegerRange { lo: -9, hi: 9 }, false).unwrap();
        let text = instance_to_string(&inst).unwrap();
        let back = match parse_instance(&text, ModeChoice::Auto).unwrap() {
            AnyInstance::Exact(i) => i,
            other => panic!("wrong field {:?}", other.kind()),
        };
        assert_eq!(back, inst);
        assert_eq!(instance_to_string(&back).unwrap(), text);

        let (inst, _) = generate_instance::<f64>(5, 2, 3, Distribution::UnitFloat, false).unwrap();
        let text = instance_to_string(&inst).unwrap();
        let AnyInstance::Float(back) = parse_instance(&text, ModeChoice::Auto).unwrap() else { panic!() };
        assert_eq!(instance_to_string(&back).unwrap(), text);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn rationals_are_normalized() {
        let text = r#"{"n":3,"k":1,"sums":["6/4","2","-1/3"]}"#;
        let AnyInstance::Exact(i) = parse_instance(text, ModeChoice::Auto).unwrap() else { panic!() };
        let canon: Vec<String> = i.sums().iter().map(Scalar::to_canonical).collect();
        assert_eq!(canon, ["-1/3", "3/2", "2"]);
    }

    #[test]
    fn auto_mode_falls_back_to_float() {
        let text = r#"{"n":3,"k":1,"sums":["0.5","2","1"]}"#;
        assert_eq!(parse_instance(text, ModeChoice::Auto).unwrap().kind(), ModeKind::Float);
        let AnyInstance::Exact(i) = parse_instance(text, ModeChoice::Rational).unwrap() else { panic!() };
        assert_eq!(i.sums()[0], BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn wrong_count_is_malformed() {
        let sums: Vec<String> = (0..9).map(|v| v.to_string()).collect();
        let text = serde_json::json!({"n": 5, "k": 2, "sums": sums}).to_string();
        let err = parse_instance(&text, ModeChoice::Auto).unwrap_err();
        assert!(matches!(err, Error::MalformedInstance(_)), "{err}");
    }

    #[test]
    fn bad_entries_name_their_index() {
        let text = r#"{"n":3,"k":1,"sums":["1","x","2"]}"#;
        let err = parse_instance(text, ModeChoice::Rational).unwrap_err().to_string();
        assert!(err.contains("sums[1]"), "{err}");
        let err = parse_instance("{\"n\":3,\n\"k\":}", ModeChoice::Auto).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(parse_exact("-1.25").unwrap(), BigRational::new((-5).into(), 4.into()));
        assert_eq!(parse_exact("3e-2").unwrap(), BigRational::new(3.into(), 100.into()));
        assert_eq!(parse_exact("1.5E2").unwrap(), BigRational::from_integer(150.into()));
        assert_eq!(parse_exact(".5").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_exact("1.2.3").is_err());
        assert!(parse_exact(".").is_err());
    }

    #[test]
    fn report_round_trip() {
        let (inst, truth) =
            generate_instance::<BigRational>(5, 2, 1, Distribution::IntegerRange { lo: -20, hi: 20 }, true).unwrap();
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::exact()));
        let file = ReportFile::from_report(&rep);
        let text = report_to_string(&rep).unwrap();
        let back: ReportFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.status, "unique");
        assert_eq!(back.solutions_as::<BigRational>().unwrap(), vec![truth.elements]);
        let keys: Vec<&str> = ["\"status\"", "\"algorithm\"", "\"n\"", "\"moser\"", "\"elapsed\""].to_vec();
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn solution_round_trip() {
        let sol = Solution::new(vec![BigRational::new(1.into(), 3.into()), BigRational::from_integer(4.into())]);
        let text = solution_to_string(&sol).unwrap();
        assert_eq!(parse_solution::<BigRational>(&text).unwrap(), sol);
    }
}
