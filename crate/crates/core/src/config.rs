//! Run configuration: a line-oriented `key = value` format with
//! `[section]` headers, comma-separated arrays and `#` comments.
//!
//! ```text
//! [run]
//! command = track
//! t_range = -1, 1
//! grid_size = 101
//!
//! [family]
//! name = expr
//! dim = 2
//! entries = 0, t, t, 0
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::family::{ExprFamily, ExprMatrixSpec, HermitianFamily};
use crate::gallery::curve_lemma::{CurveLemmaFamily, MAX_WINDOW};
use crate::gallery::{ResolventExampleFamily, SchrodingerFamily};
use crate::tolerances::Tolerances;
use crate::tracker::Order;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Track,
    Project,
    CounterexampleHolder,
    CounterexampleResolvent,
    Schrodinger,
    Extend,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Track,
        Command::Project,
        Command::CounterexampleHolder,
        Command::CounterexampleResolvent,
        Command::Schrodinger,
        Command::Extend,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Track => "track",
            Command::Project => "project",
            Command::CounterexampleHolder => "counterexample-holder",
            Command::CounterexampleResolvent => "counterexample-resolvent",
            Command::Schrodinger => "schrodinger",
            Command::Extend => "extend",
        }
    }

    fn needs_family(self) -> bool {
        matches!(self, Command::Track | Command::Project | Command::Schrodinger | Command::Extend)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Expr(ExprMatrixSpec),
    CurveLemma { n_min: u32, n_max: u32 },
    ResolventExample { m: usize },
    Schrodinger { m: usize, potential: String },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Expr(_) => "expr",
            FamilySpec::CurveLemma { .. } => "curve-lemma",
            FamilySpec::ResolventExample { .. } => "resolvent-example",
            FamilySpec::Schrodinger { .. } => "schrodinger",
        }
    }

    /// Instantiates the family.
    pub fn build(&self) -> crate::Result<Box<dyn HermitianFamily<f64>>> {
        Ok(match self {
            FamilySpec::Expr(spec) => Box::new(ExprFamily::new(spec)?),
            FamilySpec::CurveLemma { n_min, n_max } => Box::new(CurveLemmaFamily::new(*n_min, *n_max)?),
            FamilySpec::ResolventExample { m } => Box::new(ResolventExampleFamily::new(*m)?),
            FamilySpec::Schrodinger { m, potential } => Box::new(SchrodingerFamily::new(potential, *m)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContourSettings {
    pub center: Option<f64>,
    pub radius: Option<f64>,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderSettings {
    /// Paired with `alpha`.
    pub n: Vec<u32>,
    pub alpha: Vec<f64>,
    pub prefactor: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSettings {
    pub m: usize,
    pub k: usize,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Option<FamilySpec>,
    pub t_range: (f64, f64),
    pub grid_size: usize,
    pub order: Order,
    pub output: String,
    pub seed: u64,
    /// Multiplier on the estimated derivative bound for the Gronwall screen.
    pub gronwall_factor: f64,
    pub contour: ContourSettings,
    pub tolerances: Tolerances<f64>,
    pub holder: HolderSettings,
    pub resolvent: ResolventSettings,
    /// Given branches for `extend`, as expressions in `t`.
    pub given: Vec<String>,
}

/// Tolerance fields by config key.
fn tolerance_fields(t: &mut Tolerances<f64>) -> [(&'static str, &mut f64); 14] {
    [
        ("hermitian", &mut t.hermitian),
        ("eig", &mut t.eig),
        ("solve", &mut t.solve),
        ("proj", &mut t.proj),
        ("recover", &mut t.recover),
        ("imag", &mut t.imag),
        ("root_imag", &mut t.root_imag),
        ("cluster", &mut t.cluster),
        ("deriv", &mut t.deriv),
        ("deriv_tie", &mut t.deriv_tie),
        ("h_fd", &mut t.h_fd),
        ("h_fd2", &mut t.h_fd2),
        ("separation_margin", &mut t.separation_margin),
        ("resolvent_guard", &mut t.resolvent_guard),
    ]
}

const SECTIONS: [(&str, &[&str]); 7] = [
    (
        "run",
        &["command", "t_range", "grid_size", "order", "output", "seed", "gronwall_factor"],
    ),
    ("family", &["name", "dim", "entries", "n_min", "n_max", "m", "potential"]),
    ("contour", &["center", "radius", "nodes"]),
    (
        "tolerances",
        &[
            "hermitian",
            "eig",
            "solve",
            "proj",
            "recover",
            "imag",
            "root_imag",
            "cluster",
            "deriv",
            "deriv_tie",
            "h_fd",
            "h_fd2",
            "separation_margin",
            "resolvent_guard",
        ],
    ),
    ("holder", &["n", "alpha", "prefactor"]),
    ("resolvent", &["m", "k", "t"]),
    ("extend", &["given"]),
];

struct Entry {
    value: String,
    line: usize,
}

type Table = BTreeMap<(String, String), Entry>;

fn tokenize(text: &str) -> Result<Table, ConfigError> {
    let mut table = Table::new();
    let mut section: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?
                .trim();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .map(|(s, _)| *s)
                    .ok_or_else(|| ConfigError::at(line, format!("unknown section [{name}]")))?,
            );
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, found `{content}`")))?;
        let key = key.trim();
        let sec = section.ok_or_else(|| ConfigError::at(line, format!("key `{key}` outside any section")))?;
        let known = SECTIONS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !known.contains(&key) {
            return Err(ConfigError::at(line, format!("unknown key `{key}` in [{sec}]")));
        }
        let slot = (sec.to_string(), key.to_string());
        if let Some(prev) = table.get(&slot) {
            return Err(ConfigError::at(
                line,
                format!("duplicate key `{key}` in [{sec}] (first set on line {})", prev.line),
            ));
        }
        table.insert(
            slot,
            Entry {
                value: value.trim().to_string(),
                line,
            },
        );
    }
    Ok(table)
}

struct Reader {
    table: Table,
}

impl Reader {
    fn raw(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.table.get(&(sec.to_string(), key.to_string()))
    }

    fn get<V: FromStr>(&self, sec: &str, key: &str) -> Result<Option<V>, ConfigError>
    where
        V::Err: fmt::Display,
    {
        match self.raw(sec, key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|err| ConfigError::at(e.line, format!("bad value for `{key}`: {err}"))),
        }
    }

    fn list<V: FromStr>(&self, sec: &str, key: &str) -> Result<Option<Vec<V>>, ConfigError>
    where
        V::Err: fmt::Display,
    {
        let Some(e) = self.raw(sec, key) else {
            return Ok(None);
        };
        if e.value.is_empty() {
            return Ok(Some(Vec::new()));
        }
        e.value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|err| ConfigError::at(e.line, format!("bad element in `{key}`: {err}")))
            })
            .collect::<Result<Vec<V>, _>>()
            .map(Some)
    }

    fn line(&self, sec: &str, key: &str) -> usize {
        self.raw(sec, key).map_or(0, |e| e.line)
    }

    fn require<V: FromStr>(&self, sec: &str, key: &str, what: &str) -> Result<V, ConfigError>
    where
        V::Err: fmt::Display,
    {
        self.get(sec, key)?
            .ok_or_else(|| ConfigError::at(self.line(sec, "name"), format!("{what} requires `{key}` in [{sec}]")))
    }
}

fn parse_family(r: &Reader) -> Result<Option<FamilySpec>, ConfigError> {
    let Some(name) = r.get::<String>("family", "name")? else {
        return Ok(None);
    };
    let line = r.line("family", "name");
    let allowed: &[&str] = match name.as_str() {
        "expr" => &["name", "dim", "entries"],
        "curve-lemma" => &["name", "n_min", "n_max"],
        "resolvent-example" => &["name", "m"],
        "schrodinger" => &["name", "m", "potential"],
        other => return Err(ConfigError::at(line, format!("unknown family `{other}`"))),
    };
    for ((sec, key), e) in &r.table {
        if sec == "family" && !allowed.contains(&key.as_str()) {
            return Err(ConfigError::at(e.line, format!("key `{key}` does not apply to family `{name}`")));
        }
    }
    Ok(Some(match name.as_str() {
        "expr" => {
            let dim: usize = r.require("family", "dim", "family `expr`")?;
            let entries: Vec<String> = r
                .list("family", "entries")?
                .ok_or_else(|| ConfigError::at(line, "family `expr` requires `entries`"))?;
            let spec = ExprMatrixSpec { dim, entries };
            ExprFamily::new(&spec).map_err(|e| ConfigError::at(r.line("family", "entries"), e.to_string()))?;
            FamilySpec::Expr(spec)
        }
        "curve-lemma" => FamilySpec::CurveLemma {
            n_min: r.get("family", "n_min")?.unwrap_or(2),
            n_max: r.get("family", "n_max")?.unwrap_or(8),
        },
        "resolvent-example" => FamilySpec::ResolventExample {
            m: r.get("family", "m")?.unwrap_or(20),
        },
        _ => FamilySpec::Schrodinger {
            m: r.get("family", "m")?.unwrap_or(99),
            potential: r.get("family", "potential")?.unwrap_or_else(|| "0".to_string()),
        },
    }))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, found `{s}`")),
    }
}

/// Parses and validates a configuration, filling in defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let r = Reader { table: tokenize(text)? };
    let command: Command = r
        .get("run", "command")?
        .ok_or_else(|| ConfigError::at(0, "missing `command` in [run]"))?;
    let family = parse_family(&r)?;
    if command.needs_family() && family.is_none() {
        return Err(ConfigError::at(0, format!("command `{command}` needs a [family] with `name`")));
    }
    if command == Command::Schrodinger && !matches!(family, Some(FamilySpec::Schrodinger { .. })) {
        return Err(ConfigError::at(
            r.line("family", "name"),
            "command `schrodinger` needs family `schrodinger`",
        ));
    }

    let default_range = match &family {
        Some(FamilySpec::CurveLemma { n_min, n_max }) if *n_min >= 2 && *n_max >= *n_min && *n_max <= MAX_WINDOW => {
            CurveLemmaFamily::new(*n_min, *n_max)
                .map(|f| f.range())
                .unwrap_or((0.0, 1.0))
        }
        _ => (0.0, 1.0),
    };
    let t_range = match r.list::<f64>("run", "t_range")? {
        None => default_range,
        Some(v) if v.len() == 2 => (v[0], v[1]),
        Some(v) => {
            return Err(ConfigError::at(
                r.line("run", "t_range"),
                format!("`t_range` needs two values, found {}", v.len()),
            ))
        }
    };
    if !(t_range.0 < t_range.1) || !t_range.0.is_finite() || !t_range.1.is_finite() {
        return Err(ConfigError::at(
            r.line("run", "t_range"),
            format!("empty parameter range [{}, {}]", t_range.0, t_range.1),
        ));
    }
    if let Some(FamilySpec::Expr(spec)) = &family {
        // Entries are checked for Hermiticity where they are first used.
        ExprFamily::new(spec)
            .and_then(|f| HermitianFamily::<f64>::eval(&f, t_range.0))
            .map_err(|e| ConfigError::at(r.line("family", "entries"), e.to_string()))?;
    }
    let grid_size: usize = r.get("run", "grid_size")?.unwrap_or(101);
    if grid_size < 2 {
        return Err(ConfigError::at(r.line("run", "grid_size"), "`grid_size` must be at least 2"));
    }
    let order_raw: u8 = r.get("run", "order")?.unwrap_or(1);
    let order = Order::from_u8(order_raw)
        .ok_or_else(|| ConfigError::at(r.line("run", "order"), format!("`order` must be 1 or 2, found {order_raw}")))?;
    let output: String = r.get("run", "output")?.unwrap_or_else(|| command.as_str().to_string());
    if output.is_empty() || output.contains(['/', '\\']) {
        return Err(ConfigError::at(r.line("run", "output"), "`output` must be a plain file stem"));
    }
    let seed: u64 = r.get("run", "seed")?.unwrap_or(0);
    let gronwall_factor: f64 = r.get("run", "gronwall_factor")?.unwrap_or(1.01);
    if !(gronwall_factor > 0.0) {
        return Err(ConfigError::at(r.line("run", "gronwall_factor"), "`gronwall_factor` must be positive"));
    }

    let contour = ContourSettings {
        center: r.get("contour", "center")?,
        radius: r.get("contour", "radius")?,
        nodes: r.get("contour", "nodes")?.unwrap_or(crate::contour::DEFAULT_NODES),
    };
    if contour.nodes < crate::contour::MIN_NODES {
        return Err(ConfigError::at(r.line("contour", "nodes"), "`nodes` must be at least 8"));
    }
    if let Some(rad) = contour.radius {
        if !(rad > 0.0) {
            return Err(ConfigError::at(r.line("contour", "radius"), "`radius` must be positive"));
        }
    }
    if command == Command::Project && (contour.center.is_none() || contour.radius.is_none()) {
        return Err(ConfigError::at(0, "command `project` needs `center` and `radius` in [contour]"));
    }

    let mut tolerances = Tolerances::<f64>::default();
    for (key, slot) in tolerance_fields(&mut tolerances) {
        if let Some(v) = r.get::<f64>("tolerances", key)? {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ConfigError::at(r.line("tolerances", key), format!("tolerance `{key}` must be positive")));
            }
            *slot = v;
        }
    }

    let holder = HolderSettings {
        n: r.list("holder", "n")?.unwrap_or_else(|| vec![5, 6, 3, 9]),
        alpha: r.list("holder", "alpha")?.unwrap_or_else(|| vec![0.25, 0.25, 1.0, 1.0]),
        prefactor: match r.raw("holder", "prefactor") {
            None => true,
            Some(e) => parse_bool(&e.value).map_err(|m| ConfigError::at(e.line, m))?,
        },
    };
    if holder.n.len() != holder.alpha.len() {
        return Err(ConfigError::at(
            r.line("holder", "alpha"),
            "`n` and `alpha` in [holder] must have the same length",
        ));
    }
    if holder.alpha.iter().any(|&a| !(a > 0.0)) || holder.n.iter().any(|&n| n < 1) {
        return Err(ConfigError::at(r.line("holder", "alpha"), "need n >= 1 and alpha > 0"));
    }

    let resolvent = ResolventSettings {
        m: r.get("resolvent", "m")?.unwrap_or(200),
        k: r.get("resolvent", "k")?.unwrap_or(5),
        t: r
            .list("resolvent", "t")?
            .unwrap_or_else(|| (2..=50).map(|n| 1.0 / n as f64).collect()),
    };
    if resolvent.m == 0 || resolvent.k == 0 || resolvent.t.iter().any(|&t| t == 0.0 || !t.is_finite()) {
        return Err(ConfigError::at(r.line("resolvent", "t"), "need m >= 1, k >= 1 and nonzero finite t"));
    }

    let given: Vec<String> = r.list("extend", "given")?.unwrap_or_default();
    for g in &given {
        crate::expr::parse_expression(g).map_err(|e| ConfigError::at(r.line("extend", "given"), e.to_string()))?;
    }

    Ok(RunConfig {
        command,
        family,
        t_range,
        grid_size,
        order,
        output,
        seed,
        gronwall_factor,
        contour,
        tolerances,
        holder,
        resolvent,
        given,
    })
}

fn join<V: fmt::Display>(v: &[V]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Writes every field explicitly, so that parsing the result gives back
/// the same configuration.
pub fn serialize_config(c: &RunConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[run]");
    let _ = writeln!(s, "command = {}", c.command);
    let _ = writeln!(s, "t_range = {}, {}", c.t_range.0, c.t_range.1);
    let _ = writeln!(s, "grid_size = {}", c.grid_size);
    let _ = writeln!(s, "order = {}", c.order.as_u8());
    let _ = writeln!(s, "output = {}", c.output);
    let _ = writeln!(s, "seed = {}", c.seed);
    let _ = writeln!(s, "gronwall_factor = {}", c.gronwall_factor);
    if let Some(f) = &c.family {
        let _ = writeln!(s, "\n[family]");
        let _ = writeln!(s, "name = {}", f.name());
        match f {
            FamilySpec::Expr(spec) => {
                let _ = writeln!(s, "dim = {}", spec.dim);
                let _ = writeln!(s, "entries = {}", spec.entries.join(", "));
            }
            FamilySpec::CurveLemma { n_min, n_max } => {
                let _ = writeln!(s, "n_min = {n_min}\nn_max = {n_max}");
            }
            FamilySpec::ResolventExample { m } => {
                let _ = writeln!(s, "m = {m}");
            }
            FamilySpec::Schrodinger { m, potential } => {
                let _ = writeln!(s, "m = {m}\npotential = {potential}");
            }
        }
    }
    let _ = writeln!(s, "\n[contour]");
    if let Some(c) = c.contour.center {
        let _ = writeln!(s, "center = {c}");
    }
    if let Some(r) = c.contour.radius {
        let _ = writeln!(s, "radius = {r}");
    }
    let _ = writeln!(s, "nodes = {}", c.contour.nodes);
    let _ = writeln!(s, "\n[tolerances]");
    let mut tol = c.tolerances;
    for (key, v) in tolerance_fields(&mut tol) {
        let _ = writeln!(s, "{key} = {v}");
    }
    let _ = writeln!(s, "\n[holder]");
    let _ = writeln!(s, "n = {}", join(&c.holder.n));
    let _ = writeln!(s, "alpha = {}", join(&c.holder.alpha));
    let _ = writeln!(s, "prefactor = {}", c.holder.prefactor);
    let _ = writeln!(s, "\n[resolvent]");
    let _ = writeln!(s, "m = {}\nk = {}", c.resolvent.m, c.resolvent.k);
    let _ = writeln!(s, "t = {}", join(&c.resolvent.t));
    if !c.given.is_empty() {
        let _ = writeln!(s, "\n[extend]");
        let _ = writeln!(s, "given = {}", c.given.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_curve_lemma_config() {
        let c = parse_config("[run]\ncommand = track\n[family]\nname = curve-lemma\n").unwrap();
        assert_eq!(c.grid_size, 101);
        assert_eq!(c.order, Order::First);
        assert_eq!(c.output, "track");
        assert_eq!(c.family, Some(FamilySpec::CurveLemma { n_min: 2, n_max: 8 }));
        assert_eq!(c.t_range, CurveLemmaFamily::new(2, 8).unwrap().range());
        assert_eq!(c.tolerances, Tolerances::default());
    }

    #[test]
    fn duplicate_key_names_key_and_line() {
        let e = parse_config("[run]\ncommand = track\ngrid_size = 3\n\ngrid_size = 4\n").unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("grid_size") && e.message.contains("line 3"), "{e}");
    }

    #[test]
    fn unknown_keys_and_sections() {
        assert_eq!(parse_config("[run]\ncommand = track\nfoo = 1\n").unwrap_err().line, 3);
        assert_eq!(parse_config("[nope]\n").unwrap_err().line, 1);
        assert!(parse_config("command = track\n").is_err());
    }

    #[test]
    fn imaginary_diagonal_rejected() {
        let text = "[run]\ncommand = track\n[family]\nname = expr\ndim = 2\nentries = i, t, 1\n";
        let e = parse_config(text).unwrap_err();
        assert_eq!(e.line, 6);
    }

    #[test]
    fn empty_range_rejected() {
        let e = parse_config("[run]\ncommand = track\nt_range = 1, 1\n[family]\nname = expr\ndim = 1\nentries = t\n")
            .unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse_config("[run]\ncommand = track\nt_range =\n[family]\nname = expr\ndim = 1\nentries = t\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_config("# header\n[run]\ncommand = counterexample-holder # inline\n\n").unwrap();
        assert_eq!(c.command, Command::CounterexampleHolder);
        assert!(c.family.is_none());
    }

    fn arb_config() -> impl Strategy<Value = RunConfig> {
        let family = prop_oneof![
            (2u32..5, 0u32..4).prop_map(|(a, d)| FamilySpec::CurveLemma { n_min: a, n_max: a + d }),
            (1usize..50).prop_map(|m| FamilySpec::ResolventExample { m }),
            (3usize..40).prop_map(|m| FamilySpec::Schrodinger {
                m,
                potential: "t*x".into()
            }),
            Just(FamilySpec::Expr(ExprMatrixSpec {
                dim: 2,
                entries: vec!["sin(t)".into(), "t^2 + i*t".into(), "-1".into()],
            })),
        ];
        (
            family,
            -10.0f64..10.0,
            0.001f64..5.0,
            2usize..500,
            prop::bool::ANY,
            any::<u64>(),
            1e-12f64..1e-3,
            prop::collection::vec(1e-3f64..1.0, 0..5),
        )
            .prop_map(|(family, t0, w, grid_size, second, seed, cluster, ts)| {
                let mut tolerances = Tolerances::default();
                tolerances.cluster = cluster;
                RunConfig {
                    command: Command::Track,
                    family: Some(family),
                    t_range: (t0, t0 + w),
                    grid_size,
                    order: if second { Order::Second } else { Order::First },
                    output: "out".into(),
                    seed,
                    gronwall_factor: 1.01,
                    contour: ContourSettings {
                        center: Some(t0),
                        radius: Some(w),
                        nodes: 64,
                    },
                    tolerances,
                    holder: HolderSettings {
                        n: vec![3],
                        alpha: vec![0.5],
                        prefactor: second,
                    },
                    resolvent: ResolventSettings { m: 10, k: 2, t: ts },
                    given: vec!["t".into()],
                }
            })
    }

    proptest! {
        #[test]
        fn round_trip(c in arb_config()) {
            let text = serialize_config(&c);
            prop_assert_eq!(parse_config(&text).unwrap(), c);
        }
    }
}
