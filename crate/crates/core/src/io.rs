//! Text formats: game documents (TOML), trajectory records (TSV with a
//! header and a footer line), random-model configs and sweep tables.
//!
//! Player indices are 1-based in every document and 0-based in memory.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{ClassificationReport, ScalingOutcome};
use crate::dynamics::{Record, Trajectory, Verdict};
use crate::error::{Error, Result};
use crate::game::{Cap, Game, Network, Profile};
use crate::random::{RandomWeightModel, SweepRow};
use crate::scalar::Scalar;

pub const UNBOUNDED: &str = "unbounded";
const TRAJECTORY_MAGIC: &str = "# dngame-trajectory";
const VERDICT_MAGIC: &str = "# verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

/// A game on disk. Numbers are kept as text so that parsing and
/// re-serializing never changes them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub n: usize,
    /// Row-major, `n²` entries.
    #[serde(deserialize_with = "number_list")]
    pub weights: Vec<String>,
    #[serde(deserialize_with = "number_list")]
    pub targets: Vec<String>,
    #[serde(deserialize_with = "number_list")]
    pub caps: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberEntry {
    Text(String),
    Int(i64),
    Float(f64),
}

fn number_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    let entries = Vec::<NumberEntry>::deserialize(d)?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            NumberEntry::Text(s) => s,
            NumberEntry::Int(v) => v.to_string(),
            NumberEntry::Float(v) => format!("{v:?}"),
        })
        .collect())
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl GameDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: GameDocument = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        doc.check_shape()?;
        Ok(doc)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("game documents always serialize")
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(parse_err("n must be positive"));
        }
        if self.weights.len() != n * n || self.targets.len() != n || self.caps.len() != n {
            return Err(parse_err(format!(
                "n = {n} needs {} weights, {n} targets and {n} caps; found {}, {} and {}",
                n * n,
                self.weights.len(),
                self.targets.len(),
                self.caps.len()
            )));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Some(Mode::Exact)
    }

    /// Builds the game. Diagonal entries must be 1; targets at or above a
    /// cap are allowed.
    pub fn to_game<T: Scalar>(&self) -> Result<Game<T>> {
        self.check_shape()?;
        let num = |what: &str, s: &str| T::parse_number(s).map_err(|e| parse_err(format!("{what}: {e}")));
        let weights = self.weights.iter().map(|s| num("weight", s)).collect::<Result<Vec<T>>>()?;
        let targets = self.targets.iter().map(|s| num("target", s)).collect::<Result<Vec<T>>>()?;
        let caps = self
            .caps
            .iter()
            .map(|s| if s.trim() == UNBOUNDED { Ok(Cap::Unbounded) } else { num("cap", s).map(Cap::Finite) })
            .collect::<Result<Vec<Cap<T>>>>()?;
        Game::relaxed(Network::new(self.n, weights)?, targets, caps)
    }

    pub fn from_game<T: Scalar>(game: &Game<T>, label: Option<String>) -> Self {
        let fmt = |v: &T| v.format_number();
        GameDocument {
            label,
            mode: Some(if T::EXACT { Mode::Exact } else { Mode::Float }),
            n: game.n(),
            weights: game.network().weights().iter().map(fmt).collect(),
            targets: game.targets().iter().map(fmt).collect(),
            caps: game
                .caps()
                .iter()
                .map(|c| c.finite().map_or_else(|| UNBOUNDED.to_string(), fmt))
                .collect(),
        }
    }
}

/// Lower-case hex SHA-256 of a document's bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn join<T: Scalar>(values: &[T]) -> String {
    values.iter().map(Scalar::format_number).collect::<Vec<_>>().join(",")
}

fn split<T: Scalar>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| T::parse_number(s).map_err(|e| parse_err(e.to_string())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryHeader {
    pub dynamic: String,
    pub schedule: String,
    pub seed: u64,
    pub digest: String,
    /// Name of the optional potential column.
    pub potential: Option<String>,
    pub timestamp: Option<String>,
}

/// One update line. `player` is 0-based here, 1-based on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow<T> {
    pub period: usize,
    pub player: usize,
    pub profile: Profile<T>,
    pub best_response: T,
    pub potential: Option<T>,
}

impl<T: Scalar> TrajectoryRow<T> {
    pub fn from_record(record: &Record<T>, potential: Option<T>) -> Self {
        TrajectoryRow {
            period: record.period,
            player: record.player,
            profile: record.profile.clone(),
            best_response: record.best_response.clone(),
            potential,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFile<T> {
    pub header: TrajectoryHeader,
    pub rows: Vec<TrajectoryRow<T>>,
    pub verdict: Verdict<T>,
}

/// Streams records: header, one line per row, verdict footer.
pub struct TrajectoryWriter<W: Write> {
    out: W,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(mut out: W, header: &TrajectoryHeader) -> std::io::Result<Self> {
        let mut line = format!(
            "{TRAJECTORY_MAGIC}\tdynamic={}\tschedule={}\tseed={}\tdigest={}",
            header.dynamic, header.schedule, header.seed, header.digest
        );
        if let Some(p) = &header.potential {
            write!(line, "\tpotential={p}").expect("string write");
        }
        if let Some(t) = &header.timestamp {
            write!(line, "\ttimestamp={t}").expect("string write");
        }
        writeln!(out, "{line}")?;
        Ok(Self { out })
    }

    pub fn row<T: Scalar>(&mut self, row: &TrajectoryRow<T>) -> std::io::Result<()> {
        write!(
            self.out,
            "{}\t{}\t{}\t{}",
            row.period,
            row.player + 1,
            join(&row.profile),
            row.best_response.format_number()
        )?;
        if let Some(p) = &row.potential {
            write!(self.out, "\t{}", p.format_number())?;
        }
        writeln!(self.out)
    }

    pub fn finish<T: Scalar>(mut self, verdict: &Verdict<T>) -> std::io::Result<W> {
        let tail = match verdict {
            Verdict::Converged { profile, period } => format!("converged\tperiod={period}\tprofile={}", join(profile)),
            Verdict::CycleCertified { entry, length } => format!("cycle\tentry={entry}\tlength={length}"),
            Verdict::HorizonExhausted => "horizon".to_string(),
        };
        writeln!(self.out, "{VERDICT_MAGIC}\t{tail}")?;
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Per-profile potential value for the optional trajectory column.
pub type PotentialFn<'a, T> = &'a dyn Fn(&Profile<T>) -> T;

/// Writes a whole trajectory. `potential` adds a column.
pub fn write_trajectory<T: Scalar, W: Write>(
    out: W,
    header: &TrajectoryHeader,
    trajectory: &Trajectory<T>,
    potential: Option<PotentialFn<'_, T>>,
) -> std::io::Result<W> {
    let mut writer = TrajectoryWriter::new(out, header)?;
    for record in &trajectory.records {
        writer.row(&TrajectoryRow::from_record(record, potential.map(|f| f(&record.profile))))?;
    }
    writer.finish(&trajectory.verdict)
}

fn fields(line: &str) -> impl Iterator<Item = (&str, &str)> {
    line.split('\t').filter_map(|f| f.split_once('='))
}

fn field<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    fields(line)
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| parse_err(format!("missing `{key}`")))
}

fn parse_usize(text: &str) -> Result<usize> {
    text.parse().map_err(|_| parse_err(format!("not an index: `{text}`")))
}

pub fn parse_trajectory<T: Scalar>(text: &str) -> Result<TrajectoryFile<T>> {
    let lines: Vec<&str> = text.lines().collect();
    let (first, rest) = lines.split_first().ok_or_else(|| parse_err("empty trajectory"))?;
    let (last, body) = rest.split_last().ok_or_else(|| parse_err("missing verdict line"))?;
    if !first.starts_with(TRAJECTORY_MAGIC) {
        return Err(parse_err("missing trajectory header"));
    }
    let optional = |key: &str| fields(first).find(|(k, _)| *k == key).map(|(_, v)| v.to_string());
    let header = TrajectoryHeader {
        dynamic: field(first, "dynamic")?.to_string(),
        schedule: field(first, "schedule")?.to_string(),
        seed: field(first, "seed")?.parse().map_err(|_| parse_err("bad seed"))?,
        digest: field(first, "digest")?.to_string(),
        potential: optional("potential"),
        timestamp: optional("timestamp"),
    };
    let rows = body
        .iter()
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 + usize::from(header.potential.is_some()) {
                return Err(parse_err(format!("bad record line `{line}`")));
            }
            let player = parse_usize(cols[1])?;
            if player == 0 {
                return Err(parse_err("players are numbered from 1"));
            }
            Ok(TrajectoryRow {
                period: parse_usize(cols[0])?,
                player: player - 1,
                profile: Profile(split(cols[2])?),
                best_response: split::<T>(cols[3])?.remove(0),
                potential: cols.get(4).map(|c| split::<T>(c)).transpose()?.map(|mut v| v.remove(0)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = last
        .strip_prefix(VERDICT_MAGIC)
        .and_then(|t| t.strip_prefix('\t'))
        .ok_or_else(|| parse_err("missing verdict line"))?;
    let verdict = match tail.split('\t').next() {
        Some("converged") => Verdict::Converged {
            period: parse_usize(field(tail, "period")?)?,
            profile: Profile(split(field(tail, "profile")?)?),
        },
        Some("cycle") => Verdict::CycleCertified {
            entry: parse_usize(field(tail, "entry")?)?,
            length: parse_usize(field(tail, "length")?)?,
        },
        Some("horizon") => Verdict::HorizonExhausted,
        _ => return Err(parse_err(format!("unknown verdict `{tail}`"))),
    };
    Ok(TrajectoryFile { header, rows, verdict })
}

pub fn parse_model(text: &str) -> Result<RandomWeightModel> {
    let model: RandomWeightModel = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    model.validate()?;
    Ok(model)
}

/// Tab-separated sweep table with a header row.
pub fn format_sweep(rows: &[SweepRow]) -> String {
    let mut out = String::from("n\ttrials\thits\tfrequency\tstd_error\tci_low\tci_high\tbound\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            r.n, r.trials, r.hits, r.frequency, r.std_error, r.ci_low, r.ci_high, r.bound
        )
        .expect("string write");
    }
    out
}

#[derive(Debug, Serialize)]
struct ReportDocument {
    n: usize,
    sign_symmetric: bool,
    symmetrizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    symmetrize_scaling: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symmetrize_squares: Option<Vec<String>>,
    weak_influences: bool,
    weak_externalities: bool,
    influences_boundary: bool,
    externalities_boundary: bool,
    dan: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    dan_order: Option<Vec<usize>>,
    amplifying_links: Vec<[usize; 2]>,
    spectral: SpectralDocument,
    influence_scaling: ScalingDocument,
    externality_scaling: ScalingDocument,
}

#[derive(Debug, Serialize)]
struct SpectralDocument {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Debug, Serialize)]
struct ScalingDocument {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<f64>>,
}

impl From<&ScalingOutcome> for ScalingDocument {
    fn from(outcome: &ScalingOutcome) -> Self {
        match outcome {
            ScalingOutcome::Witness(a) => ScalingDocument { status: "witness", witness: Some(a.values().to_vec()) },
            ScalingOutcome::None => ScalingDocument { status: "none", witness: None },
            ScalingOutcome::Indeterminate => ScalingDocument { status: "indeterminate", witness: None },
        }
    }
}

/// Renders a classification report as TOML.
pub fn format_report<T: Scalar>(report: &ClassificationReport<T>) -> String {
    let spectral = match &report.spectral {
        Ok(s) => SpectralDocument {
            status: match s.compare_below(1.0) {
                Some(true) => "below_one".into(),
                Some(false) => "at_least_one".into(),
                None => "indeterminate".into(),
            },
            radius: Some(s.estimate),
            lower: Some(s.lower),
            upper: Some(s.upper),
            detail: None,
        },
        Err(e) => SpectralDocument {
            status: "indeterminate".into(),
            radius: None,
            lower: None,
            upper: None,
            detail: Some(e.clone()),
        },
    };
    let doc = ReportDocument {
        n: report.n,
        sign_symmetric: report.sign_symmetric,
        symmetrizable: report.symmetrizable.is_some(),
        symmetrize_scaling: report.symmetrizable.as_ref().map(|w| w.scaling().values().to_vec()),
        symmetrize_squares: report
            .symmetrizable
            .as_ref()
            .map(|w| w.squared().iter().map(Scalar::format_number).collect()),
        weak_influences: report.weak_influences,
        weak_externalities: report.weak_externalities,
        influences_boundary: report.influences_boundary,
        externalities_boundary: report.externalities_boundary,
        dan: report.dan.is_some(),
        dan_order: report.dan.as_ref().map(|o| o.iter().map(|i| i + 1).collect()),
        amplifying_links: report.amplifying_links.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        spectral,
        influence_scaling: (&report.influence_scaling).into(),
        externality_scaling: (&report.externality_scaling).into(),
    };
    toml::to_string(&doc).expect("reports always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classify;
    use crate::catalog;
    use crate::dynamics::{run, DynamicSpec, RunOptions, Schedule};
    use crate::scalar::Rational;

    const THREE_CYCLE: &str = r#"
label = "directed three-cycle"
mode = "exact"
n = 3
weights = ["1", "0", "1", "1", "1", "0", "0", "1", "1"]
targets = ["1", "1", "1"]
caps = ["1", "1", "1"]
"#;

    #[test]
    fn game_document_parses() {
        let doc = GameDocument::parse(THREE_CYCLE).unwrap();
        let game: Game<Rational> = doc.to_game().unwrap();
        assert_eq!(game, catalog::directed_three_cycle());
        assert!(doc.is_exact());
    }

    #[test]
    fn accepts_bare_numbers_and_unbounded() {
        let text = "n = 2\nweights = [1, -2, 0.5, 1]\ntargets = [1, 1]\ncaps = [\"unbounded\", 0.5]\n";
        let game: Game<f64> = GameDocument::parse(text).unwrap().to_game().unwrap();
        assert_eq!(game.caps()[0], Cap::Unbounded);
        assert_eq!(*game.network().get(1, 0), 0.5);
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let game: Game<Rational> = catalog::host_parasite(Cap::Finite(Rational::from_ratio(2, 1)), Cap::Unbounded);
        let doc = GameDocument::from_game(&game, Some("host and parasite".into()));
        let text = doc.to_toml();
        let back = GameDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_toml(), text);
        assert_eq!(back.to_game::<Rational>().unwrap(), game);

        let float: Game<f64> = catalog::weighted_three_cycle(0.1);
        let text = GameDocument::from_game(&float, None).to_toml();
        assert_eq!(GameDocument::parse(&text).unwrap().to_game::<f64>().unwrap(), float);
    }

    #[test]
    fn shape_errors_are_parse_errors() {
        let text = "n = 2\nweights = [1, 0, 1]\ntargets = [1, 1]\ncaps = [1, 1]\n";
        assert!(matches!(GameDocument::parse(text), Err(Error::Parse(_))));
        let text = "n = 1\nweights = [\"x\"]\ntargets = [1]\ncaps = [1]\n";
        assert!(matches!(GameDocument::parse(text).unwrap().to_game::<f64>(), Err(Error::Parse(_))));
    }

    #[test]
    fn trajectory_round_trip() {
        let game: Game<Rational> = catalog::directed_three_cycle();
        let schedule = Schedule::cyclic(vec![2, 0, 1]).unwrap();
        let x0 = Profile(vec![Rational::from_ratio(1, 1), Rational::from_ratio(0, 1), Rational::from_ratio(0, 1)]);
        let traj = run(&game, &x0, &schedule, &DynamicSpec::Brd, &RunOptions::new::<Rational>(50)).unwrap();
        let header = TrajectoryHeader {
            dynamic: "brd".into(),
            schedule: schedule.to_string(),
            seed: 0,
            digest: digest(THREE_CYCLE.as_bytes()),
            potential: None,
            timestamp: None,
        };
        let bytes = write_trajectory(Vec::new(), &header, &traj, None).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), traj.records.len() + 2);
        let parsed: TrajectoryFile<Rational> = parse_trajectory(&text).unwrap();
        assert_eq!(parsed.header, header);
        assert_eq!(parsed.verdict, traj.verdict);
        assert_eq!(parsed.rows.len(), traj.records.len());
        assert_eq!(parsed.rows[0].player, 2);
        assert!(text.lines().nth(1).unwrap().starts_with("0\t3\t"));
    }

    #[test]
    fn report_lists_amplifying_link() {
        let game: Game<Rational> = catalog::host_parasite(Cap::Unbounded, Cap::Unbounded);
        let text = format_report(&classify(game.network(), 0.0));
        assert!(text.contains("amplifying_links = [[1, 2]]"), "{text}");
        assert!(text.contains("sign_symmetric = false"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
