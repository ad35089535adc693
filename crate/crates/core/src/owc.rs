//! Line-of-sight Lambertian channels and the two application studies built
//! on them: receiver placement contours and room-averaged sum-rates.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::ic::{tdma_sum_rate, ChannelConfig, InnerSweep, SweepGrid};
use crate::p2p::capacity_lower;
use crate::par::map_slice;

/// Position and unit pointing direction of an emitter or detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pose {
    pub position: [f64; 3],
    pub direction: [f64; 3],
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Pose {
    /// Normalizes `direction`; a zero or non-finite direction is an error.
    pub fn new(position: [f64; 3], direction: [f64; 3]) -> Result<Self> {
        let n = dot(direction, direction).sqrt();
        if !(n > 0.0 && n.is_finite()) || position.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("pose needs a finite position and a nonzero direction"));
        }
        Ok(Pose {
            position,
            direction: direction.map(|c| c / n),
        })
    }

    pub fn moved_to(&self, position: [f64; 3]) -> Pose {
        Pose { position, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambertianParams {
    /// Half-intensity semi-angle Φ of the emitter.
    pub half_angle_deg: f64,
    /// Detector field of view Ψ.
    pub fov_deg: f64,
    #[serde(rename = "area")]
    pub detector_area: f64,
    #[serde(rename = "gain")]
    pub detector_gain: f64,
    /// Multiplier applied to every gain; absorbs the unit convention.
    #[serde(default = "one")]
    pub gain_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl LambertianParams {
    pub fn validate(&self) -> Result<()> {
        lambert_order(self.half_angle_deg)?;
        if !(self.fov_deg > 0.0 && self.fov_deg <= 90.0) {
            return Err(Error::config("lambertian.fov_deg", format!("must lie in (0, 90], got {}", self.fov_deg)));
        }
        for (name, v) in [
            ("lambertian.area", self.detector_area),
            ("lambertian.gain", self.detector_gain),
            ("lambertian.gain_scale", self.gain_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Lambertian emission order `m = −ln 2 / ln cos Φ`.
pub fn lambert_order(half_angle_deg: f64) -> Result<f64> {
    if !(half_angle_deg > 0.0 && half_angle_deg < 90.0) {
        return Err(Error::config(
            "lambertian.half_angle_deg",
            format!("must lie in (0, 90), got {half_angle_deg}"),
        ));
    }
    Ok(-std::f64::consts::LN_2 / half_angle_deg.to_radians().cos().ln())
}

/// Line-of-sight gain
/// `scale·(m+1)GS/(2πd²)·cos^m φ·cos ψ·1(ψ < Ψ)`,
/// zero when either end faces away from the other.
pub fn channel_gain(tx: &Pose, rx: &Pose, p: &LambertianParams) -> Result<f64> {
    let m = lambert_order(p.half_angle_deg)?;
    let ray = sub(rx.position, tx.position);
    let d2 = dot(ray, ray);
    if d2 == 0.0 {
        return Err(Error::domain("transmitter and receiver coincide"));
    }
    let d = d2.sqrt();
    let cos_emit = dot(tx.direction, ray) / d;
    let cos_recv = -dot(rx.direction, ray) / d;
    if cos_emit <= 0.0 || cos_recv <= 0.0 {
        return Ok(0.0);
    }
    if cos_recv.min(1.0).acos() >= p.fov_deg.to_radians() {
        return Ok(0.0);
    }
    let base = (m + 1.0) * p.detector_gain * p.detector_area / (2.0 * std::f64::consts::PI * d2);
    Ok(p.gain_scale * base * cos_emit.powf(m) * cos_recv)
}

/// What to do with a placement where a direct link has zero gain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeadLinkPolicy {
    /// The placement is rejected and reported as a null cell.
    #[default]
    Null,
    /// The user without a direct link stays silent; the other user transmits
    /// alone. Only placements where both direct links are dead are rejected.
    SilentUser,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// `[x_min, y_min, x_max, y_max]` of the plane swept by receiver 2.
    pub rect: [f64; 4],
    pub nx: usize,
    pub ny: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::config("sweep", "nx and ny must be at least 2"));
        }
        let [x0, y0, x1, y1] = self.rect;
        if !(x0 < x1 && y0 < y1) || self.rect.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.rect", "needs finite x_min < x_max and y_min < y_max"));
        }
        Ok(())
    }

    /// Row-major sample points: `y` outer, `x` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let [x0, y0, x1, y1] = self.rect;
        let lerp = |a: f64, b: f64, k: usize, n: usize| a + (b - a) * k as f64 / (n - 1) as f64;
        (0..self.ny)
            .flat_map(|iy| (0..self.nx).map(move |ix| (lerp(x0, x1, ix, self.nx), lerp(y0, y1, iy, self.ny))))
            .collect()
    }
}

/// Room split into square cells whose centers are candidate receiver
/// positions, and into left / middle / right bands along x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    /// `[x_min, y_min, x_max, y_max]` of the floor plan.
    pub room: [f64; 4],
    pub cell: f64,
    /// Band edges: left is `x < bands[0]`, right is `x > bands[1]`.
    pub bands: [f64; 2],
    /// Receiver height.
    pub z: f64,
}

impl TableSpec {
    pub fn validate(&self) -> Result<()> {
        let [x0, y0, x1, y1] = self.room;
        if !(x0 < x1 && y0 < y1) || self.room.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("table.room", "needs finite x_min < x_max and y_min < y_max"));
        }
        if !(self.cell > 0.0 && self.cell.is_finite()) {
            return Err(Error::config("table.cell", "must be finite and positive"));
        }
        if !(self.bands[0] <= self.bands[1]) {
            return Err(Error::config("table.bands", "left edge must not exceed right edge"));
        }
        let centers = self.centers();
        for band in Band::ALL {
            if !centers.iter().any(|c| self.band(c[0]) == band) {
                return Err(Error::config("table.bands", format!("band `{}` contains no cell", band.name())));
            }
        }
        Ok(())
    }

    /// Cell centers, `y` outer and `x` inner.
    pub fn centers(&self) -> Vec<[f64; 3]> {
        let [x0, y0, x1, y1] = self.room;
        let nx = ((x1 - x0) / self.cell).round() as usize;
        let ny = ((y1 - y0) / self.cell).round() as usize;
        (0..ny)
            .flat_map(|iy| {
                (0..nx).map(move |ix| {
                    [
                        x0 + (ix as f64 + 0.5) * self.cell,
                        y0 + (iy as f64 + 0.5) * self.cell,
                        self.z,
                    ]
                })
            })
            .collect()
    }

    fn band(&self, x: f64) -> Band {
        if x < self.bands[0] {
            Band::Left
        } else if x > self.bands[1] {
            Band::Right
        } else {
            Band::Middle
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Band {
    Left,
    Middle,
    Right,
}

impl Band {
    const ALL: [Band; 3] = [Band::Left, Band::Middle, Band::Right];

    fn name(self) -> &'static str {
        match self {
            Band::Left => "left",
            Band::Middle => "middle",
            Band::Right => "right",
        }
    }
}

/// Keys of the averaged table, by the bands of receiver 1 and receiver 2.
pub const PAIR_LEFT_RIGHT: &str = "left_right";
pub const PAIR_MIXED: &str = "left_middle_or_middle_right";
pub const PAIR_MIDDLE_MIDDLE: &str = "middle_middle";

fn pair_class(b1: Band, b2: Band) -> Option<&'static str> {
    match (b1, b2) {
        (Band::Left, Band::Right) => Some(PAIR_LEFT_RIGHT),
        (Band::Left, Band::Middle) | (Band::Middle, Band::Right) => Some(PAIR_MIXED),
        (Band::Middle, Band::Middle) => Some(PAIR_MIDDLE_MIDDLE),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Tdma,
    Tin,
    Hk,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Tdma, Scheme::Tin, Scheme::Hk];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Tdma => "tdma",
            Scheme::Tin => "tin",
            Scheme::Hk => "hk",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tdma" => Ok(Scheme::Tdma),
            "tin" => Ok(Scheme::Tin),
            "hk" => Ok(Scheme::Hk),
            other => Err(Error::config("schemes", format!("unknown scheme `{other}` (expected tdma, tin or hk)"))),
        }
    }
}

/// Sum-rates of the requested schemes at one placement.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SchemeRates {
    pub tdma: Option<f64>,
    pub tin: Option<f64>,
    pub hk: Option<f64>,
}

impl SchemeRates {
    pub fn get(&self, s: Scheme) -> Option<f64> {
        match s {
            Scheme::Tdma => self.tdma,
            Scheme::Tin => self.tin,
            Scheme::Hk => self.hk,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub units: String,
    pub peak: f64,
    pub sigma: f64,
    pub alpha: [f64; 2],
    pub lambertian: LambertianParams,
    pub transmitters: [Pose; 2],
    pub receivers: [Pose; 2],
    pub dead_links: DeadLinkPolicy,
    pub grid: SweepGrid,
    pub sweep: Option<SweepSpec>,
    pub table: Option<TableSpec>,
}

/// The channel a scenario induces: either a full two-user configuration or,
/// under [`DeadLinkPolicy::SilentUser`], a single active link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Placement {
    Pair(ChannelConfig),
    /// Only this user (0 or 1) transmits, over the given direct gain.
    Single { user: usize, gain: f64 },
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.peak > 0.0 && self.peak.is_finite()) {
            return Err(Error::config("peak", "must be finite and positive"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("sigma", "must be finite and positive"));
        }
        for (i, a) in self.alpha.iter().enumerate() {
            if !(*a > 0.0 && *a <= 1.0) {
                return Err(Error::config(format!("alpha[{i}]"), format!("must lie in (0, 1], got {a}")));
            }
        }
        self.lambertian.validate()?;
        self.grid.validate()?;
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let Some(t) = &self.table {
            t.validate()?;
        }
        Ok(())
    }

    fn gains_for(&self, receivers: &[Pose; 2]) -> Result<[[f64; 2]; 2]> {
        let mut g = [[0.0; 2]; 2];
        for (i, tx) in self.transmitters.iter().enumerate() {
            for (j, rx) in receivers.iter().enumerate() {
                g[i][j] = channel_gain(tx, rx, &self.lambertian)?;
            }
        }
        Ok(g)
    }

    /// Placement for the given receiver poses, honoring the dead-link policy.
    pub fn placement(&self, receivers: &[Pose; 2]) -> Result<Placement> {
        let g = self.gains_for(receivers)?;
        let dead = [g[0][0] == 0.0, g[1][1] == 0.0];
        match (dead, self.dead_links) {
            ([false, false], _) => Ok(Placement::Pair(ChannelConfig::new(self.peak, self.sigma, self.alpha, g)?)),
            ([true, true], _) | (_, DeadLinkPolicy::Null) => {
                Err(Error::Rejected("a direct link has zero gain".into()))
            }
            ([d0, _], DeadLinkPolicy::SilentUser) => {
                let user = usize::from(d0);
                Ok(Placement::Single {
                    user,
                    gain: g[user][user],
                })
            }
        }
    }
}

/// Channel of the scenario at its configured receiver poses.
pub fn scenario_config(s: &Scenario) -> Result<ChannelConfig> {
    let g = s.gains_for(&s.receivers)?;
    if g[0][0] == 0.0 || g[1][1] == 0.0 {
        return Err(Error::Rejected("a direct link has zero gain".into()));
    }
    ChannelConfig::new(s.peak, s.sigma, s.alpha, g)
}

/// Sum-rates of `schemes` on one placement.
pub fn evaluate(s: &Scenario, placement: &Placement, schemes: &[Scheme]) -> Result<SchemeRates> {
    let want = |k| schemes.contains(&k);
    let mut out = SchemeRates::default();
    match placement {
        Placement::Single { user, gain } => {
            let c = capacity_lower(gain * s.peak, s.alpha[*user], s.sigma)?;
            out.tdma = want(Scheme::Tdma).then_some(0.5 * c);
            out.tin = want(Scheme::Tin).then_some(c);
            out.hk = want(Scheme::Hk).then_some(c);
        }
        Placement::Pair(cfg) => {
            if want(Scheme::Tdma) {
                out.tdma = Some(tdma_sum_rate(cfg)?);
            }
            if want(Scheme::Tin) || want(Scheme::Hk) {
                let sweep = InnerSweep::new(cfg, &s.grid)?;
                if want(Scheme::Tin) {
                    out.tin = Some(sweep.tin_sum_rate());
                }
                if want(Scheme::Hk) {
                    out.hk = Some(sweep.hk_sum_rate()?);
                }
            }
        }
    }
    Ok(out)
}

/// Sum-rates are invariant under relabeling the users, so a placement and its
/// mirror share one key.
fn memo_key(p: &Placement) -> Vec<u64> {
    match p {
        Placement::Single { user, gain } => vec![0, *user as u64, gain.to_bits()],
        Placement::Pair(cfg) => {
            let flat = |c: &ChannelConfig| {
                let g = c.gains;
                [g[0][0], g[0][1], g[1][0], g[1][1], c.alpha[0], c.alpha[1]].map(f64::to_bits)
            };
            let (a, b) = (flat(cfg), flat(&cfg.swapped()));
            let mut key = vec![1];
            key.extend_from_slice(if a <= b { &a } else { &b });
            key
        }
    }
}

/// Evaluates many placements, computing each distinct channel once. Results
/// come back in input order; rejected placements are `None`.
fn evaluate_many(s: &Scenario, placements: &[Option<Placement>], schemes: &[Scheme]) -> Result<Vec<Option<SchemeRates>>> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut unique: Vec<Placement> = Vec::new();
    let slots: Vec<Option<usize>> = placements
        .iter()
        .map(|p| {
            p.as_ref().map(|p| {
                *index.entry(memo_key(p)).or_insert_with(|| {
                    unique.push(*p);
                    unique.len() - 1
                })
            })
        })
        .collect();
    let rates: Vec<SchemeRates> = map_slice(&unique, |p| evaluate(s, p, schemes))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(slots.into_iter().map(|k| k.map(|k| rates[k])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub x: f64,
    pub y: f64,
    /// `None` when the placement is rejected.
    pub rates: Option<SchemeRates>,
}

/// Moves receiver 2 over the sample points of `spec` (keeping its height and
/// orientation) and evaluates `schemes` at each. Output is row-major.
pub fn placement_sweep(s: &Scenario, spec: &SweepSpec, schemes: &[Scheme]) -> Result<Vec<SweepCell>> {
    s.validate()?;
    spec.validate()?;
    let z = s.receivers[1].position[2];
    let points = spec.points();
    let placements: Vec<Option<Placement>> = points
        .iter()
        .map(|&(x, y)| {
            let rx = [s.receivers[0], s.receivers[1].moved_to([x, y, z])];
            match s.placement(&rx) {
                Ok(p) => Ok(Some(p)),
                Err(e) if e.is_validation() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let rates = evaluate_many(s, &placements, schemes)?;
    Ok(points
        .into_iter()
        .zip(rates)
        .map(|((x, y), rates)| SweepCell { x, y, rates })
        .collect())
}

/// CSV with header `x,y,tdma,tin,hk`; nulls and unrequested schemes are empty.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,y,tdma,tin,hk")?;
    for c in cells {
        let f = |s: Scheme| c.rates.and_then(|r| r.get(s)).map(sig9).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            sig9(c.x),
            sig9(c.y),
            f(Scheme::Tdma),
            f(Scheme::Tin),
            f(Scheme::Hk)
        )?;
    }
    Ok(())
}

/// Average sum-rate table: `{pair_class: {scheme: bits}}`.
pub type AverageTable = BTreeMap<String, BTreeMap<String, f64>>;

/// Averages each scheme's sum-rate over all pairs of cell centers with
/// receiver 1 in the left or middle band and receiver 2 in the middle or right
/// band, grouped by band pair. Rejected placements are left out of the mean.
pub fn indoor_average_table(s: &Scenario, spec: &TableSpec, schemes: &[Scheme]) -> Result<AverageTable> {
    s.validate()?;
    spec.validate()?;
    let centers = spec.centers();
    let mut classes = Vec::new();
    let mut placements = Vec::new();
    for &c1 in &centers {
        for &c2 in &centers {
            let Some(class) = pair_class(spec.band(c1[0]), spec.band(c2[0])) else {
                continue;
            };
            let rx = [s.receivers[0].moved_to(c1), s.receivers[1].moved_to(c2)];
            classes.push(class);
            placements.push(match s.placement(&rx) {
                Ok(p) => Some(p),
                Err(e) if e.is_validation() => None,
                Err(e) => return Err(e),
            });
        }
    }
    let rates = evaluate_many(s, &placements, schemes)?;
    let mut sums: BTreeMap<&str, BTreeMap<Scheme, (f64, usize)>> = BTreeMap::new();
    for (class, r) in classes.iter().zip(&rates) {
        let Some(r) = r else { continue };
        let entry = sums.entry(class).or_default();
        for &sc in schemes {
            if let Some(v) = r.get(sc) {
                let e = entry.entry(sc).or_insert((0.0, 0));
                e.0 += v;
                e.1 += 1;
            }
        }
    }
    Ok(sums
        .into_iter()
        .map(|(class, m)| {
            let row = m
                .into_iter()
                .map(|(sc, (total, n))| (sc.name().to_string(), total / n as f64))
                .collect();
            (class.to_string(), row)
        })
        .collect())
}

/// Scenario file layout. Positions may be 2-D (z = 0) or 3-D, and `alpha`
/// may be a single ratio shared by both users.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    units: String,
    peak: f64,
    sigma: f64,
    alpha: AlphaSpec,
    lambertian: LambertianParams,
    transmitters: Vec<PoseFile>,
    receivers: Vec<PoseFile>,
    #[serde(default)]
    dead_links: DeadLinkPolicy,
    #[serde(default)]
    grid: Option<SweepGrid>,
    #[serde(default)]
    sweep: Option<SweepSpec>,
    #[serde(default)]
    table: Option<TableSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AlphaSpec {
    Shared(f64),
    PerUser([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseFile {
    pos: Vec<f64>,
    dir: Vec<f64>,
}

fn vec3(v: &[f64], field: &str) -> Result<[f64; 3]> {
    match *v {
        [x, y] => Ok([x, y, 0.0]),
        [x, y, z] => Ok([x, y, z]),
        _ => Err(Error::config(field, format!("expected 2 or 3 coordinates, got {}", v.len()))),
    }
}

fn poses(list: &[PoseFile], field: &str) -> Result<[Pose; 2]> {
    if list.len() != 2 {
        return Err(Error::config(field, format!("expected exactly 2 entries, got {}", list.len())));
    }
    let one = |i: usize| -> Result<Pose> {
        let f = format!("{field}[{i}]");
        Pose::new(vec3(&list[i].pos, &format!("{f}.pos"))?, vec3(&list[i].dir, &format!("{f}.dir"))?)
            .map_err(|e| Error::config(f.clone(), e.to_string()))
    };
    Ok([one(0)?, one(1)?])
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: ScenarioFile = serde_json::from_str(text)?;
        let s = Scenario {
            units: f.units,
            peak: f.peak,
            sigma: f.sigma,
            alpha: match f.alpha {
                AlphaSpec::Shared(a) => [a, a],
                AlphaSpec::PerUser(a) => a,
            },
            lambertian: f.lambertian,
            transmitters: poses(&f.transmitters, "transmitters")?,
            receivers: poses(&f.receivers, "receivers")?,
            dead_links: f.dead_links,
            grid: f.grid.unwrap_or(SweepGrid::REDUCED),
            sweep: f.sweep,
            table: f.table,
        };
        s.validate()?;
        Ok(s)
    }

    /// Built-in scenarios by name: `onchip` and `indoor`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "onchip" => Ok(onchip()),
            "indoor" => Ok(indoor()),
            other => Err(Error::config("scenario", format!("unknown built-in scenario `{other}`"))),
        }
    }
}

fn pose(p: [f64; 3], d: [f64; 3]) -> Pose {
    Pose::new(p, d).expect("built-in pose")
}

/// 6×6 cm chip, lengths in cm, detector area 0.1 cm². Receiver 2 is swept
/// over the whole package.
pub fn onchip() -> Scenario {
    let up = [0.0, 1.0, 0.0];
    let down = [0.0, -1.0, 0.0];
    Scenario {
        units: "cm".into(),
        peak: 1000.0,
        sigma: 1.0,
        alpha: [0.5, 0.5],
        lambertian: LambertianParams {
            half_angle_deg: 60.0,
            fov_deg: 70.0,
            detector_area: 0.1,
            detector_gain: 1.0,
            gain_scale: 1.0,
        },
        transmitters: [pose([1.5, 0.0, 0.0], up), pose([4.5, 0.0, 0.0], up)],
        receivers: [pose([0.0, 2.0, 0.0], down), pose([4.0, 4.0, 0.0], down)],
        dead_links: DeadLinkPolicy::Null,
        grid: SweepGrid::REDUCED,
        sweep: Some(SweepSpec {
            rect: [0.0, 0.0, 6.0, 6.0],
            nx: 61,
            ny: 61,
        }),
        table: None,
    }
}

/// 8×5×3 m room, lengths in m, detector area taken as the raw figure 10.
/// Receiver 1 sits at (−2, 1, 0.8) for the placement sweep; the table moves
/// both receivers over the 0.5 m cell centers.
pub fn indoor() -> Scenario {
    let down = [0.0, 0.0, -1.0];
    let up = [0.0, 0.0, 1.0];
    Scenario {
        units: "m".into(),
        peak: 1000.0,
        sigma: 1.0,
        alpha: [0.5, 0.5],
        lambertian: LambertianParams {
            half_angle_deg: 60.0,
            fov_deg: 70.0,
            detector_area: 10.0,
            detector_gain: 1.0,
            gain_scale: 1.0,
        },
        transmitters: [pose([-2.0, 0.0, 3.0], down), pose([2.0, 0.0, 3.0], down)],
        receivers: [pose([-2.0, 1.0, 0.8], up), pose([2.0, 1.0, 0.8], up)],
        dead_links: DeadLinkPolicy::SilentUser,
        grid: SweepGrid::REDUCED,
        sweep: Some(SweepSpec {
            rect: [-3.75, -2.25, 3.75, 2.25],
            nx: 16,
            ny: 10,
        }),
        table: Some(TableSpec {
            room: [-4.0, -2.5, 4.0, 2.5],
            cell: 0.5,
            bands: [-1.0, 1.0],
            z: 0.8,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert!((lambert_order(60.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambert_order(45.0).unwrap() - 2.0).abs() < 1e-9);
        assert!(lambert_order(89.999).unwrap() < lambert_order(89.9).unwrap());
        assert!(lambert_order(89.999_999).unwrap() < 0.05);
        assert!(lambert_order(90.0).is_err());
        assert!(lambert_order(0.0).is_err());
    }

    #[test]
    fn onchip_gains() {
        let s = onchip();
        let g = scenario_config(&s).unwrap().gains;
        let want = [[3.26e-3, 1.03e-3], [2.17e-4, 1.93e-3]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((g[i][j] / want[i][j] - 1.0).abs() < 0.01, "{i}{j}: {}", g[i][j]);
            }
        }
    }

    #[test]
    fn straight_down_gain() {
        let s = indoor();
        let rx = pose([-2.0, 0.0, 0.8], [0.0, 0.0, 1.0]);
        let h = channel_gain(&s.transmitters[0], &rx, &s.lambertian).unwrap();
        assert!((h - 2.0 * 10.0 / (2.0 * std::f64::consts::PI * 4.84)).abs() < 1e-12);
        assert!((h - 0.658).abs() < 1e-3);
    }

    #[test]
    fn fov_and_backside() {
        let p = onchip().lambertian;
        let tx = pose([0.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let rx = pose([3.0, 1.0, 0.0], [0.0, -1.0, 0.0]);
        assert_eq!(channel_gain(&tx, &rx, &p).unwrap(), 0.0);
        let behind = pose([0.0, -1.0, 0.0], [0.0, 1.0, 0.0]);
        assert_eq!(channel_gain(&tx, &behind, &p).unwrap(), 0.0);
        assert!(channel_gain(&tx, &tx, &p).is_err());
    }

    #[test]
    fn silent_user_policy() {
        let mut s = indoor();
        let far = [s.receivers[0], s.receivers[1].moved_to([-3.75, 2.25, 0.8])];
        match s.placement(&far).unwrap() {
            Placement::Single { user, .. } => assert_eq!(user, 0),
            other => panic!("{other:?}"),
        }
        s.dead_links = DeadLinkPolicy::Null;
        assert!(matches!(s.placement(&far), Err(Error::Rejected(_))));
    }

    #[test]
    fn table_spec_cells() {
        let t = indoor().table.unwrap();
        let c = t.centers();
        assert_eq!(c.len(), 160);
        let count = |b| c.iter().filter(|p| t.band(p[0]) == b).count();
        assert_eq!((count(Band::Left), count(Band::Middle), count(Band::Right)), (60, 40, 60));
        let mut bad = t;
        bad.bands = [5.0, 6.0];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_round_trip_of_builtin_shape() {
        let text = r#"{
            "units": "cm", "peak": 1000, "sigma": 1, "alpha": 0.5,
            "lambertian": {"half_angle_deg": 60, "fov_deg": 70, "area": 0.1, "gain": 1},
            "transmitters": [{"pos": [1.5, 0], "dir": [0, 1]}, {"pos": [4.5, 0], "dir": [0, 1]}],
            "receivers": [{"pos": [0, 2], "dir": [0, -1]}, {"pos": [4, 4], "dir": [0, -1]}],
            "sweep": {"rect": [0, 0, 6, 6], "nx": 61, "ny": 61}
        }"#;
        let s = Scenario::from_json(text).unwrap();
        assert_eq!(s, onchip());
    }

    #[test]
    fn json_errors_name_fields() {
        let text = r#"{"peak": 1, "sigma": 1, "alpha": 0.5,
            "lambertian": {"half_angle_deg": 95, "fov_deg": 70, "area": 1, "gain": 1},
            "transmitters": [], "receivers": []}"#;
        let e = Scenario::from_json(text).unwrap_err();
        assert!(e.to_string().contains("transmitters"), "{e}");
    }
}
