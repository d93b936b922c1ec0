//! The `dngame` command line: argument definitions and command execution.
//!
//! Exit codes: 0 success or convergence, 1 other failure, 2 parse or
//! configuration error, 3 indeterminate spectral classification, 4 certified
//! cycle, 5 horizon exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dngame::analysis::{
    classify, dan_order, dan_scaling, rescale, scaling_for_weak_externalities, scaling_for_weak_influences,
    symmetrize, ScalingVector,
};
use dngame::analysis::spectral::DEFAULT_MARGIN;
use dngame::dynamics::{run, DynamicSpec, Overshoot, RunOptions, Schedule, Sign, Verdict};
use dngame::equilibrium::{check_uniqueness, solve_contraction, solve_enumerate, Uniqueness, ENUMERATION_MAX_N};
use dngame::io::{digest, format_report, format_sweep, parse_model, write_trajectory, GameDocument, TrajectoryHeader};
use dngame::potential::{verify_br_potential, PotentialSpec};
use dngame::random::{
    estimate_cycle_probability, find_parasite_witness, find_three_group_witness, sample_network, CycleWitness,
    WitnessPattern,
};
use dngame::{Cap, Error, Game, Profile, Rational, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_CYCLE: i32 = 4;
pub const EXIT_HORIZON: i32 = 5;

/// Default directory for trajectory files when `--output` is absent.
pub const OUT_DIR_ENV: &str = "DNGAME_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "dngame", version, about = "Directed network public-goods games")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exact rational arithmetic (also selected by `mode = "exact"` in the game file).
    #[arg(long, global = true)]
    pub exact: bool,
    /// Numerical tolerance; defaults to 0 in exact mode and 1e-9 otherwise.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Maximum number of revisions.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub horizon: usize,
    /// Omit the timestamp from trajectory headers.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a game's network.
    Analyze { game: PathBuf },
    /// Run a one-sided dynamic and write its trajectory.
    Simulate(SimulateArgs),
    /// Compute Nash equilibria.
    Equilibrium { game: PathBuf },
    /// Find a diagonal rescaling of the network.
    Rescale(RescaleArgs),
    /// Evaluate or verify best-response potentials.
    #[command(subcommand)]
    Potential(PotentialCommand),
    /// Random networks and cycle witnesses.
    #[command(subcommand)]
    Random(RandomCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DynamicKind {
    Brd,
    Brad,
    Brcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OvershootKind {
    Plus,
    Minus,
    Alternating,
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub game: PathBuf,
    #[arg(long, value_enum, default_value_t = DynamicKind::Brd)]
    pub dynamic: DynamicKind,
    /// BRAD approach parameter.
    #[arg(long, default_value = "0")]
    pub beta: String,
    /// BRCD centering parameter.
    #[arg(long, default_value = "0")]
    pub alpha: String,
    /// Step fraction for BRAD and BRCD.
    #[arg(long, default_value = "1")]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = OvershootKind::Alternating)]
    pub overshoot: OvershootKind,
    /// `round-robin`, `round-robin:2,1,3`, `cyclic:3,1,2` or `random` (1-based players).
    #[arg(long, default_value = "round-robin")]
    pub schedule: String,
    /// Initial profile, comma separated; zeros by default.
    #[arg(long)]
    pub x0: Option<String>,
    /// Add a potential column.
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Trajectory file; falls back to `$DNGAME_OUT_DIR`, then stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RescaleMethod {
    Symmetrize,
    WeakInfluences,
    WeakExternalities,
    Dan,
}

#[derive(Debug, Args)]
pub struct RescaleArgs {
    pub game: PathBuf,
    /// Scaling that makes the network symmetric
    #[arg(long, group = "method")]
    pub symmetrize: bool,
    /// Scaling with every off-diagonal absolute row sum below one
    #[arg(long, group = "method")]
    pub weak_influences: bool,
    /// Scaling with every off-diagonal absolute column sum below one
    #[arg(long, group = "method")]
    pub weak_externalities: bool,
    /// Weak-externalities scaling for a directed acyclic network
    #[arg(long, group = "method")]
    pub dan: bool,
    /// DAN margin `m ≥ 1`.
    #[arg(long, default_value = "2")]
    pub margin: String,
}

impl RescaleArgs {
    fn method(&self) -> Option<RescaleMethod> {
        [
            (self.symmetrize, RescaleMethod::Symmetrize),
            (self.weak_influences, RescaleMethod::WeakInfluences),
            (self.weak_externalities, RescaleMethod::WeakExternalities),
            (self.dan, RescaleMethod::Dan),
        ]
        .into_iter()
        .find_map(|(on, m)| on.then_some(m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    /// Requires a symmetric network.
    Symmetric,
    /// Uses the symmetrizing scaling.
    Rescaled,
    /// Uses a weak-externalities scaling.
    WeightedL1,
}

#[derive(Debug, Subcommand)]
pub enum PotentialCommand {
    /// Potential value at a profile.
    Eval {
        game: PathBuf,
        #[arg(long, value_enum)]
        kind: PotentialKind,
        #[arg(long)]
        x: String,
    },
    /// Check numerically that coordinate maximizers are best responses.
    Verify {
        game: PathBuf,
        #[arg(long, value_enum)]
        kind: PotentialKind,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessVariant {
    Any,
    ThreeGroup,
    Parasite,
}

#[derive(Debug, Subcommand)]
pub enum RandomCommand {
    /// Sample a network and print it as a game document.
    Sample {
        model: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        target: f64,
    },
    /// Search a game's network for a cycle witness and replay it.
    Witness {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = WitnessVariant::Any)]
        variant: WitnessVariant,
        /// Group size
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Minimum cross-group weight; also the host-side lower bound
        #[arg(long, default_value = "1")]
        w_low: String,
        /// Harm threshold: the host weighs each parasite at most `-w_minus`
        #[arg(long, default_value = "1")]
        w_minus: String,
        /// Upper bound on the host-side weight
        #[arg(long, default_value = "1")]
        w_high: String,
    },
    /// Witness frequency per network size as a tab-separated table.
    Sweep {
        model: PathBuf,
        /// Comma-separated sizes.
        #[arg(long, default_value = "3,9,27")]
        n: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        target: f64,
    },
}

/// Result of a command: output already written, exit code to return.
pub type Outcome = Result<i32, Error>;

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Parse(_) | Error::Config(_) => EXIT_PARSE,
        Error::Indeterminate { .. } => EXIT_INDETERMINATE,
        _ => EXIT_FAILURE,
    }
}

/// Runs `cli`, writing results to `out` and diagnostics to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        // the reader went away (e.g. `| head`): stop quietly
        Err(Error::Config(msg)) if msg == BROKEN_PIPE => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

const BROKEN_PIPE: &str = "i/o: broken pipe";

fn io_err(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        return Error::Config(BROKEN_PIPE.into());
    }
    Error::Config(format!("i/o: {e}"))
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

struct Loaded {
    doc: GameDocument,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded, Error> {
    let text = read(path)?;
    Ok(Loaded { digest: digest(text.as_bytes()), doc: GameDocument::parse(&text)? })
}

fn exact_mode(global: &GlobalArgs, doc: &GameDocument) -> bool {
    global.exact || doc.is_exact()
}

fn tolerance<T: Scalar>(global: &GlobalArgs) -> f64 {
    global.tol.unwrap_or(if T::EXACT { 0.0 } else { 1e-9 })
}

fn number<T: Scalar>(text: &str, what: &str) -> Result<T, Error> {
    T::parse_number(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn parse_list<T: Scalar>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',').map(|s| number(s, what)).collect()
}

fn parse_players(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(p) if p >= 1 => Ok(p - 1),
            _ => Err(Error::Parse(format!("bad player index `{s}` (players are numbered from 1)"))),
        })
        .collect()
}

fn parse_schedule(text: &str, n: usize, seed: u64) -> Result<Schedule, Error> {
    let (kind, players) = match text.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (text, None),
    };
    let schedule = match (kind, players) {
        ("round-robin", None) => Schedule::round_robin(n),
        ("round-robin", Some(p)) => Schedule::RoundRobin { order: parse_players(p)? },
        ("cyclic", Some(p)) => Schedule::cyclic(parse_players(p)?)?,
        ("random", None) => Schedule::Random { n, seed },
        _ => return Err(Error::Parse(format!("unknown schedule `{text}`"))),
    };
    schedule.check(n)?;
    Ok(schedule)
}

fn join<T: Scalar>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn quoted<T: Scalar>(values: &[T]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("\"{}\"", v.format_number())).collect();
    format!("[{}]", items.join(", "))
}

fn one_based(values: &[usize]) -> String {
    let items: Vec<String> = values.iter().map(|v| (v + 1).to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { game } => {
            let loaded = load(game)?;
            if exact_mode(g, &loaded.doc) {
                analyze::<Rational>(g, &loaded, out)
            } else {
                analyze::<f64>(g, &loaded, out)
            }
        }
        Command::Simulate(args) => {
            let loaded = load(&args.game)?;
            if exact_mode(g, &loaded.doc) {
                simulate::<Rational>(g, args, &loaded, out, err)
            } else {
                simulate::<f64>(g, args, &loaded, out, err)
            }
        }
        Command::Equilibrium { game } => {
            let loaded = load(game)?;
            if exact_mode(g, &loaded.doc) {
                equilibrium::<Rational>(g, &loaded, out)
            } else {
                equilibrium::<f64>(g, &loaded, out)
            }
        }
        Command::Rescale(args) => {
            let loaded = load(&args.game)?;
            if exact_mode(g, &loaded.doc) {
                rescale_cmd::<Rational>(g, args, &loaded, out)
            } else {
                rescale_cmd::<f64>(g, args, &loaded, out)
            }
        }
        Command::Potential(cmd) => potential(g, cmd, out),
        Command::Random(cmd) => random(g, cmd, out),
    }
}

fn analyze<T: Scalar>(g: &GlobalArgs, loaded: &Loaded, out: &mut dyn Write) -> Outcome {
    let game: Game<T> = loaded.doc.to_game()?;
    let report = classify(game.network(), tolerance::<T>(g));
    write!(out, "{}", format_report(&report)).map_err(io_err)?;
    Ok(if report.is_indeterminate() { EXIT_INDETERMINATE } else { EXIT_OK })
}

fn potential_spec<T: Scalar>(game: &Game<T>, kind: PotentialKind, tol: f64) -> Result<PotentialSpec<T>, Error> {
    match kind {
        PotentialKind::Symmetric => Ok(PotentialSpec::SymmetricQuadratic),
        PotentialKind::Rescaled => symmetrize(game.network(), tol)
            .map(PotentialSpec::RescaledQuadratic)
            .ok_or_else(|| Error::Precondition("the network is not symmetrizable".into())),
        PotentialKind::WeightedL1 => {
            let a = scaling_for_weak_externalities(game.network(), DEFAULT_MARGIN)?
                .ok_or_else(|| Error::Precondition("no weak-externalities scaling exists".into()))?;
            let values = a
                .values()
                .iter()
                .map(|v| T::from_f64(*v).ok_or_else(|| Error::Precondition("non-finite scaling".into())))
                .collect::<Result<Vec<T>, Error>>()?;
            Ok(PotentialSpec::WeightedL1(ScalingVector::new(values)?))
        }
    }
}

fn simulate<T: Scalar>(
    g: &GlobalArgs,
    args: &SimulateArgs,
    loaded: &Loaded,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let game: Game<T> = loaded.doc.to_game()?;
    let n = game.n();
    let lambda = number::<T>(&args.lambda, "lambda")?;
    let spec = match args.dynamic {
        DynamicKind::Brd => DynamicSpec::Brd,
        DynamicKind::Brad => DynamicSpec::Brad { beta: number(&args.beta, "beta")?, lambda },
        DynamicKind::Brcd => DynamicSpec::Brcd {
            alpha: number(&args.alpha, "alpha")?,
            lambda,
            overshoot: match args.overshoot {
                OvershootKind::Plus => Overshoot::Fixed(Sign::Plus),
                OvershootKind::Minus => Overshoot::Fixed(Sign::Minus),
                OvershootKind::Alternating => Overshoot::Alternating,
                OvershootKind::Random => Overshoot::Random,
            },
        },
    };
    let schedule = parse_schedule(&args.schedule, n, g.seed)?;
    let x0 = match &args.x0 {
        Some(text) => Profile(parse_list::<T>(text, "x0")?),
        None => Profile::zeros(n),
    };
    if x0.len() != n {
        return Err(Error::Parse(format!("x0 has {} entries, the game has {n} players", x0.len())));
    }
    let mut options = RunOptions::new::<T>(g.horizon);
    options.seed = g.seed;
    if let Some(tol) = g.tol {
        options.conv_tol = tol;
    }
    let potential = args.potential.map(|k| potential_spec(&game, k, tolerance::<T>(g))).transpose()?;
    let trajectory = run(&game, &x0, &schedule, &spec, &options)?;

    let timestamp = (!g.no_timestamp).then(|| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("unix:{secs}")
    });
    let header = TrajectoryHeader {
        dynamic: spec.to_string(),
        schedule: schedule.to_string(),
        seed: g.seed,
        digest: loaded.digest.clone(),
        potential: potential.as_ref().map(|p| p.name().to_string()),
        timestamp,
    };
    let eval = potential.as_ref().map(|p| move |x: &Profile<T>| p.evaluate_unchecked(&game, x));
    let eval_ref = eval.as_ref().map(|f| f as &dyn Fn(&Profile<T>) -> T);

    let target = args.output.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| {
            PathBuf::from(dir).join(format!("trajectory-{}-seed{}.tsv", &loaded.digest[..12], g.seed))
        })
    });
    match &target {
        Some(path) => {
            let file = fs::File::create(path).map_err(io_err)?;
            write_trajectory(std::io::BufWriter::new(file), &header, &trajectory, eval_ref).map_err(io_err)?;
            writeln!(err, "trajectory: {}", path.display()).map_err(io_err)?;
        }
        None => {
            write_trajectory(&mut *out, &header, &trajectory, eval_ref).map_err(io_err)?;
        }
    }
    writeln!(err, "verdict: {}", trajectory.verdict).map_err(io_err)?;
    writeln!(err, "final: ({})", join(trajectory.final_profile())).map_err(io_err)?;
    Ok(match trajectory.verdict {
        Verdict::Converged { .. } => EXIT_OK,
        Verdict::CycleCertified { .. } => EXIT_CYCLE,
        Verdict::HorizonExhausted => EXIT_HORIZON,
    })
}

fn equilibrium<T: Scalar>(g: &GlobalArgs, loaded: &Loaded, out: &mut dyn Write) -> Outcome {
    let game: Game<T> = loaded.doc.to_game()?;
    let tol = tolerance::<T>(g);
    if game.n() > ENUMERATION_MAX_N {
        let a = scaling_for_weak_influences(game.network(), DEFAULT_MARGIN)?
            .ok_or_else(|| Error::Precondition("too many players to enumerate and no contraction scaling".into()))?;
        let x = solve_contraction(&game, &Profile::zeros(game.n()), Some(&a), tol.max(1e-12), 100_000)?;
        writeln!(out, "method = contraction\nunique = true\nx = ({})", join(&x)).map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    let set = solve_enumerate(&game, tol)?;
    let unique = match check_uniqueness(&game, tol) {
        Uniqueness::Spectral { .. } => "true (spectral certificate)".to_string(),
        other => match other.is_unique() {
            Some(u) => u.to_string(),
            None => "unknown".to_string(),
        },
    };
    writeln!(out, "method = enumeration\ncount = {}\nunique = {unique}", set.len()).map_err(io_err)?;
    if set.degenerate_continuum {
        writeln!(out, "continuum = true").map_err(io_err)?;
    }
    for e in &set.equilibria {
        let pattern: Vec<String> = e.pattern.iter().map(ToString::to_string).collect();
        writeln!(out, "x = ({})\tpattern = ({})\tresidual = {}", join(&e.profile), pattern.join(", "), e.residual)
            .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn rescale_cmd<T: Scalar>(g: &GlobalArgs, args: &RescaleArgs, loaded: &Loaded, out: &mut dyn Write) -> Outcome {
    let game: Game<T> = loaded.doc.to_game()?;
    let network = game.network();
    let method = args.method().ok_or_else(|| {
        Error::Config("choose one of --symmetrize, --weak-influences, --weak-externalities, --dan".into())
    })?;
    let lift = |a: ScalingVector<f64>| -> Result<ScalingVector<T>, Error> {
        let values = a.values().iter().map(|v| T::from_f64(*v).expect("finite scaling")).collect();
        ScalingVector::new(values)
    };
    let (name, scaling): (&str, Option<ScalingVector<T>>) = match method {
        RescaleMethod::Symmetrize => {
            let witness = symmetrize(network, tolerance::<T>(g));
            if let Some(w) = &witness {
                writeln!(out, "squares = {}", quoted(w.squared())).map_err(io_err)?;
            }
            let scaling = match witness {
                Some(w) if T::EXACT => {
                    // exact square roots may not exist; report squares and a float scaling
                    writeln!(out, "scaling_f64 = {:?}", w.scaling().values()).map_err(io_err)?;
                    writeln!(out, "method = \"symmetrize\"\nstatus = \"witness\"").map_err(io_err)?;
                    return Ok(EXIT_OK);
                }
                Some(w) => Some(lift(w.scaling())?),
                None => None,
            };
            ("symmetrize", scaling)
        }
        RescaleMethod::WeakInfluences => {
            ("weak-influences", scaling_for_weak_influences(network, DEFAULT_MARGIN)?.map(lift).transpose()?)
        }
        RescaleMethod::WeakExternalities => {
            ("weak-externalities", scaling_for_weak_externalities(network, DEFAULT_MARGIN)?.map(lift).transpose()?)
        }
        RescaleMethod::Dan => {
            let margin = number::<T>(&args.margin, "margin")?;
            match dan_order(network) {
                Some(order) => {
                    writeln!(out, "order = {}", one_based(&order)).map_err(io_err)?;
                    ("dan", Some(dan_scaling(network, margin)?))
                }
                None => ("dan", None),
            }
        }
    };
    writeln!(out, "method = \"{name}\"").map_err(io_err)?;
    match scaling {
        Some(a) => {
            let rescaled = rescale(network, &a)?;
            writeln!(out, "status = \"witness\"\nscaling = {}", quoted(a.values())).map_err(io_err)?;
            writeln!(out, "weights = {}", quoted(rescaled.rescaled.weights())).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "status = \"none\"").map_err(io_err)?;
            Ok(EXIT_FAILURE)
        }
    }
}

fn potential(g: &GlobalArgs, cmd: &PotentialCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        PotentialCommand::Eval { game, kind, x } => {
            let loaded = load(game)?;
            if exact_mode(g, &loaded.doc) {
                potential_eval::<Rational>(g, &loaded, *kind, x, out)
            } else {
                potential_eval::<f64>(g, &loaded, *kind, x, out)
            }
        }
        PotentialCommand::Verify { game, kind, samples, grid } => {
            let loaded = load(game)?;
            let game: Game<f64> = loaded.doc.to_game()?;
            let spec = potential_spec(&game, *kind, g.tol.unwrap_or(1e-9))?;
            spec.validate(&game, g.tol.unwrap_or(1e-9))?;
            let check = verify_br_potential(&game, &spec, *samples, *grid, g.seed)?;
            writeln!(out, "potential = \"{}\"\nsamples = {}\nmax_deviation = {:e}", spec.name(), check.samples, check.max_deviation)
                .map_err(io_err)?;
            match check.counterexample {
                None => {
                    writeln!(out, "verified = true").map_err(io_err)?;
                    Ok(EXIT_OK)
                }
                Some(c) => {
                    writeln!(
                        out,
                        "verified = false\ncounterexample = {{ player = {}, profile = {:?}, maximizer = {}, best_response = {} }}",
                        c.player + 1,
                        c.profile.0,
                        c.maximizer,
                        c.best_response
                    )
                    .map_err(io_err)?;
                    Ok(EXIT_FAILURE)
                }
            }
        }
    }
}

fn potential_eval<T: Scalar>(
    g: &GlobalArgs,
    loaded: &Loaded,
    kind: PotentialKind,
    x: &str,
    out: &mut dyn Write,
) -> Outcome {
    let game: Game<T> = loaded.doc.to_game()?;
    let x = parse_list::<T>(x, "x")?;
    if x.len() != game.n() || !game.contains(&x) {
        return Err(Error::Config(format!("profile ({}) is outside the action set", join(&x))));
    }
    let spec = potential_spec(&game, kind, tolerance::<T>(g))?;
    let value = spec.evaluate(&game, &x, tolerance::<T>(g))?;
    writeln!(out, "potential = \"{}\"\nvalue = {}", spec.name(), value).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn pattern_text(pattern: &WitnessPattern) -> String {
    match pattern {
        WitnessPattern::ThreeGroup { groups } => format!(
            "three-group I1 = {} I2 = {} I3 = {}",
            one_based(&groups[0]),
            one_based(&groups[1]),
            one_based(&groups[2])
        ),
        WitnessPattern::Parasite { host, parasites } => {
            format!("parasite host = {} parasites = {}", host + 1, one_based(parasites))
        }
    }
}

fn random(g: &GlobalArgs, cmd: &RandomCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        RandomCommand::Sample { model, n, target } => {
            let model = parse_model(&read(model)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let network = sample_network(&model, *n, &mut rng)?;
            let game = Game::relaxed(network, vec![*target; *n], vec![Cap::Unbounded; *n])?;
            let label = format!("random sample n={n} seed={}", g.seed);
            write!(out, "{}", GameDocument::from_game(&game, Some(label)).to_toml()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        RandomCommand::Witness { game, variant, m, w_low, w_minus, w_high } => {
            let loaded = load(game)?;
            let game: Game<Rational> = loaded.doc.to_game()?;
            let (network, targets) = (game.network(), game.targets());
            let w_low = number::<Rational>(w_low, "w_low")?;
            let w_minus = number::<Rational>(w_minus, "w_minus")?;
            let w_high = number::<Rational>(w_high, "w_high")?;
            let three = || find_three_group_witness(network, targets, &w_low, *m);
            let parasite = || find_parasite_witness(network, targets, &w_minus, &w_low, &w_high, *m);
            let witness: Option<CycleWitness<Rational>> = match variant {
                WitnessVariant::ThreeGroup => three(),
                WitnessVariant::Parasite => parasite(),
                WitnessVariant::Any => three().or_else(parasite),
            };
            let Some(witness) = witness else {
                writeln!(out, "witness = none").map_err(io_err)?;
                return Ok(EXIT_FAILURE);
            };
            let trajectory = witness.replay(network, targets)?;
            writeln!(out, "witness = {}", pattern_text(&witness.pattern)).map_err(io_err)?;
            writeln!(out, "start = ({})", join(&witness.start)).map_err(io_err)?;
            writeln!(out, "schedule = {}", witness.schedule()).map_err(io_err)?;
            writeln!(out, "replay = {}", trajectory.verdict).map_err(io_err)?;
            let certified = matches!(trajectory.verdict, Verdict::CycleCertified { .. }) && witness.follows_script(&trajectory);
            Ok(if certified { EXIT_OK } else { EXIT_FAILURE })
        }
        RandomCommand::Sweep { model, n, trials, target } => {
            let model = parse_model(&read(model)?)?;
            let sizes = n
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad size `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = estimate_cycle_probability(&model, *target, &sizes, *trials, g.seed)?;
            write!(out, "{}", format_sweep(&rows)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}
