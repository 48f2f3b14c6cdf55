//! Verification suites: configuration, envelope checks and the check lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};

use crate::building::{classify_vertex, enumerate_ball, enumerate_ball_dfs, incident, neighbors, vertex, VertexLattice};
use crate::dl::{components_w1, surface_member, DlSpace, StrataCounts, StratumLabel};
use crate::error::{Result, StrataError};
use crate::lattice::SympSpace;
use crate::report::{CheckResult, Report};
use crate::ring::make_ring;
use crate::rz::{Findings, ParamModel, QuatModel};
use crate::weyl::{self, AffineWeylElem, Case};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    DlPartition,
    DlComponents,
    BuildingBall,
    RzQuaternionic,
    RzParamodular,
    WeylEo,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::DlPartition,
        Suite::DlComponents,
        Suite::BuildingBall,
        Suite::RzQuaternionic,
        Suite::RzParamodular,
        Suite::WeylEo,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DlPartition => "dl-partition",
            Suite::DlComponents => "dl-components",
            Suite::BuildingBall => "building-ball",
            Suite::RzQuaternionic => "rz-quaternionic",
            Suite::RzParamodular => "rz-paramodular",
            Suite::WeylEo => "weyl-eo",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = StrataError;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| StrataError::Envelope(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: u32,
    pub d: usize,
    pub radius: usize,
    pub precision: u32,
    /// Record wall-clock times. Off by default so reports are byte-stable.
    pub timings: bool,
}

impl SuiteConfig {
    /// Validates the envelope p in {3,5}, d in {1,2,4}, radius <= 2 before
    /// anything is computed. Precision defaults to 2 radius + 4.
    pub fn new(suite: Suite, p: u32, d: usize, radius: usize, precision: Option<u32>) -> Result<SuiteConfig> {
        if !matches!(p, 3 | 5) {
            return Err(StrataError::Envelope(format!("p = {p} (supported: 3, 5)")));
        }
        if !matches!(d, 1 | 2 | 4) {
            return Err(StrataError::Envelope(format!("d = {d} (supported: 1, 2, 4)")));
        }
        if radius > 2 {
            return Err(StrataError::Envelope(format!("radius {radius} exceeds 2")));
        }
        let precision = precision.unwrap_or(2 * radius as u32 + 4);
        if precision < 2 * radius as u32 + 4 {
            return Err(StrataError::Envelope(format!("precision {precision} below 2 radius + 4")));
        }
        if (p as f64).powi(precision as i32) >= (1u64 << 31) as f64 {
            return Err(StrataError::Envelope(format!("p^m = {p}^{precision} does not fit in 31 bits")));
        }
        Ok(SuiteConfig { suite, p, d, radius, precision, timings: false })
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.d as u32)
    }

    fn params(&self) -> Value {
        json!({
            "p": self.p,
            "d": self.d,
            "radius": self.radius,
            "precision": self.precision,
            "conventions": {
                "rationality": "census points are those defined over the degree-d ring; completeness is relative to d",
                "pi": "[[0, I], [p I, 0]], so that Pi sigma(Pi) = p",
                "tau": "quaternionic tau is sigma-semilinear, paramodular tau is sigma^2-semilinear",
                "omega": "adjoint model: rho has order 2",
            },
        })
    }
}

/// Runs a suite. Envelope problems have already been rejected by
/// SuiteConfig::new; anything that goes wrong inside a check becomes a
/// failing check with the error as witness.
pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let mut r = Runner { cfg, report: Report::new(cfg.suite.name(), cfg.params()) };
    let suites: Vec<Suite> = match cfg.suite {
        Suite::All => Suite::ALL[..6].to_vec(),
        s => vec![s],
    };
    for s in suites {
        match s {
            Suite::DlPartition => r.dl_partition(),
            Suite::DlComponents => r.dl_components(),
            Suite::BuildingBall => r.building_ball(),
            Suite::RzQuaternionic => r.rz_quaternionic(),
            Suite::RzParamodular => r.rz_paramodular(),
            Suite::WeylEo => r.weyl_eo(),
            Suite::All => unreachable!(),
        }
    }
    r.report
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    report: Report,
}

fn findings_check(name: &str, f: &Findings, actual: Value) -> CheckResult {
    CheckResult::judge(name, f.ok(), json!({"findings": 0}), json!({"findings": f.count, "detail": actual}), f.samples.first().cloned())
}

impl Runner<'_> {
    /// Runs a group of checks, timing the group as a whole. An error fails
    /// the first named check.
    fn group(&mut self, names: &[&str], f: impl FnOnce() -> Result<Vec<CheckResult>>) {
        let t = Instant::now();
        let out = f().unwrap_or_else(|e| vec![CheckResult::judge(names[0], false, "no error", "error", Some(e.to_string()))]);
        let ms = if self.cfg.timings { t.elapsed().as_millis() as u64 } else { 0 };
        for mut c in out {
            c.elapsed_ms = ms;
            self.report.push(c);
        }
    }

    fn skip(&mut self, names: &[&str], reason: &str) {
        for n in names {
            self.report.push(CheckResult::skipped(n, reason));
        }
    }

    fn dl_partition(&mut self) {
        let cfg = self.cfg;
        let names = ["dl-partition/labels", "dl-partition/surface", "dl-partition/rationality"];
        if cfg.q() > 81 {
            return self.skip(&names, "q > 81: too many subspaces");
        }
        self.group(&names, || {
            let s = DlSpace::new(cfg.p, cfg.d)?;
            let g = &s.geom;
            let q = cfg.q();
            let mut counts = StrataCounts::default();
            let mut surface = Findings::default();
            for l in g.all_subspaces(1) {
                let u = g.perp(&l);
                let label = s.classify_point_minus(&u)?;
                counts.add(label);
                let x = l.rows()[0];
                let on = surface_member(&g.field, &x)?;
                surface.check(
                    on == s.in_y_plus_direct(&l) && on == (s.classify_point_plus(&l)? != StratumLabel::NotInY),
                    || format!("surface={on} label={label:?} at {}", l.format()),
                );
            }
            let hyperplanes = (q.pow(4) - 1) / (q - 1);
            // hyperplanes enumerated directly against perps of lines
            let direct = s.count_strata();
            let mut out = vec![CheckResult::compare(
                "dl-partition/labels",
                json!({"total": hyperplanes, "via_lines": direct}),
                json!({"total": direct.total(), "via_lines": counts}),
                None,
            )];
            out.push(findings_check("dl-partition/surface", &surface, json!(counts)));
            let rat = match cfg.d {
                1 => CheckResult::judge(
                    "dl-partition/rationality",
                    counts.xbw1 + counts.xbw2 == 0,
                    "all members XP1",
                    counts,
                    None,
                ),
                2 => CheckResult::judge("dl-partition/rationality", counts.xbw2 == 0, "no XBw2", counts, None),
                _ => CheckResult::judge("dl-partition/rationality", counts.xbw2 > 0, "all three pieces occur", counts, None),
            };
            out.push(rat);
            Ok(out)
        });
    }

    fn dl_components(&mut self) {
        let p = self.cfg.p;
        self.group(&["dl-components/planes"], || {
            let comps = components_w1(p)?;
            let g = DlSpace::new(p, 1)?.geom;
            let pp = p as usize;
            let bad = comps.iter().find(|c| g.perp(&c.plane) != c.plane || c.lines.len() != pp + 1);
            Ok(vec![
                CheckResult::compare("dl-components/planes", (pp + 1) * (pp * pp + 1), comps.len(), None),
                CheckResult::judge(
                    "dl-components/lines",
                    bad.is_none(),
                    json!({"lines_per_plane": pp + 1}),
                    json!({"planes": comps.len()}),
                    bad.map(|c| c.plane.format()),
                ),
            ])
        });
    }

    fn building_ball(&mut self) {
        let cfg = self.cfg;
        let names = ["building-ball/type1-neighbors", "building-ball/ball", "building-ball/type1-witnesses"];
        let q = cfg.q();
        if (cfg.radius == 2 && q > 5) || q > 25 {
            return self.skip(&names, "ball too large for this q and radius");
        }
        self.group(&names, || {
            let sp = SympSpace::standard(std::sync::Arc::new(make_ring(cfg.p, cfg.d, cfg.precision)?), 4);
            let l1 = vertex(&sp, sp.diag_lattice(&[0, 0, 0, 1])?)?.ok_or(StrataError::NotContained)?;
            let n0 = neighbors(&sp, &l1, 0)?;
            let n2 = neighbors(&sp, &l1, 2)?;
            let mut out = vec![CheckResult::compare(
                "building-ball/type1-neighbors",
                json!({"type0": q + 1, "type2": q + 1}),
                json!({"type0": n0.len(), "type2": n2.len()}),
                Some(l1.lat.format(sp.ctx())),
            )];
            let base = vertex(&sp, sp.standard_lattice())?.ok_or(StrataError::NotContained)?;
            let ball = enumerate_ball(&sp, &base, cfg.radius)?;
            let dfs = enumerate_ball_dfs(&sp, &base, cfg.radius)?;
            let bfs: BTreeSet<VertexLattice> = ball.nodes.keys().cloned().collect();
            let mut f = Findings::default();
            f.check(dfs == bfs, || format!("bfs {} vs dfs {} vertices", bfs.len(), dfs.len()));
            for (a, b) in &ball.edges {
                f.check(incident(&sp, &a.lat, &b.lat)? && incident(&sp, &b.lat, &a.lat)?, || {
                    format!("edge {} - {}", a.lat.format(sp.ctx()), b.lat.format(sp.ctx()))
                });
            }
            out.push(findings_check("building-ball/ball", &f, json!(ball.summary())));
            let mut w = Findings::default();
            for v in ball.nodes.keys().filter(|v| v.vtype == 1) {
                let up = neighbors(&sp, v, 0)?;
                let down = neighbors(&sp, v, 2)?;
                let ok = !up.is_empty()
                    && !down.is_empty()
                    && sp.contains(&up[0].lat, &v.lat)?
                    && sp.contains(&v.lat, &down[0].lat)?
                    && classify_vertex(&sp, &up[0].lat)? == Some(0);
                w.check(ok, || v.lat.format(sp.ctx()));
            }
            out.push(findings_check("building-ball/type1-witnesses", &w, json!({"type1": ball.count_by_type()[1]})));
            Ok(out)
        });
    }

    fn rz_quaternionic(&mut self) {
        let cfg = self.cfg;
        let q = cfg.q();
        let bij = ["rz-quaternionic/bijection-l0", "rz-quaternionic/bijection-l2", "rz-quaternionic/duality"];
        if q.pow(3) > 1_000_000 {
            self.skip(&bij, "q^3 > 10^6 residue hyperplanes");
        } else {
            self.group(&bij, || {
                let m = QuatModel::new(cfg.p, cfg.d, cfg.precision)?;
                let sp = m.space();
                let l0 = vertex(sp, sp.standard_lattice())?.ok_or(StrataError::NotContained)?;
                let l2 = vertex(sp, m.dual_swap(&l0.lat)?)?.ok_or(StrataError::NotContained)?;
                let r0 = m.bijection_report_l0(&l0)?;
                let r2 = m.bijection_report_l2(&l2)?;
                let dual = m.duality_findings(&l0)?;
                let ok2 = r2.passed() && r2.residue == r0.residue && r2.points == r0.points;
                let w2 = r2.findings.samples.first().cloned().or_else(|| Some(r2.vertex.clone()));
                Ok(vec![
                    CheckResult::judge("rz-quaternionic/bijection-l0", r0.passed(), "injective, surjective, stratum-matching", &r0, r0.findings.samples.first().cloned()),
                    CheckResult::judge("rz-quaternionic/bijection-l2", ok2, "passes with the residue counts of the L0 side", &r2, w2),
                    findings_check("rz-quaternionic/duality", &dual, Value::Null),
                ])
            });
        }
        let census = [
            "rz-quaternionic/pappas",
            "rz-quaternionic/crucial-lemma",
            "rz-quaternionic/labels",
            "rz-quaternionic/full-module",
            "rz-quaternionic/intersections",
            "rz-quaternionic/equivalence",
        ];
        if cfg.radius > 1 {
            return self.skip(&census, "global census supports radius <= 1");
        }
        if q > 9 {
            return self.skip(&census, "global census needs q <= 9");
        }
        let radius = cfg.radius;
        self.group(&census[..5], || {
            let m = QuatModel::new(cfg.p, cfg.d, cfg.precision)?;
            let points = m.census(radius)?;
            let r = m.census_report(&points)?;
            let it = m.intersection_checks(&points)?;
            let mut full = r.full_module.clone();
            full.merge(r.superspecial.clone());
            Ok(vec![
                CheckResult::judge(
                    "rz-quaternionic/pappas",
                    r.pappas.ok() && r.max_pappas_defect <= 1,
                    json!({"max_defect_at_most": 1}),
                    json!({"points": r.points, "max_defect": r.max_pappas_defect, "findings": r.pappas.count}),
                    r.pappas.samples.first().cloned(),
                ),
                findings_check("rz-quaternionic/crucial-lemma", &r.crucial, json!(r.crucial_cases)),
                findings_check("rz-quaternionic/labels", &r.partition, json!(r.labels)),
                findings_check("rz-quaternionic/full-module", &full, json!({"points": r.points})),
                findings_check("rz-quaternionic/intersections", &it.findings, json!(it)),
            ])
        });
        if radius == 0 {
            return self.skip(&census[5..], "equivalence scan runs over the radius-1 ball");
        }
        // every ball lattice at q <= 5, every 1000th non-prefiltered one above
        let stride = if q <= 5 { 1 } else { 1000 };
        self.group(&census[5..], || {
            let m = QuatModel::new(cfg.p, cfg.d, cfg.precision)?;
            let e = m.equivalence_scan(stride)?;
            Ok(vec![findings_check("rz-quaternionic/equivalence", &e.findings, json!({"enumerated": e.enumerated, "checked": e.checked, "points": e.points, "stride": stride}))])
        });
    }

    fn rz_paramodular(&mut self) {
        let cfg = self.cfg;
        let q = cfg.q();
        let names = ["rz-paramodular/base-pair", "rz-paramodular/census", "rz-paramodular/pair-intersections"];
        if cfg.d == 1 {
            return self.skip(&names, "paramodular model needs d in {2, 4}");
        }
        let p2 = (cfg.p as u64).pow(2);
        self.group(&names[..1], || {
            let m = ParamModel::new(cfg.p, cfg.d, cfg.precision)?;
            let r = m.param_bijection_report(&m.base_pair()?)?;
            let ok = r.findings.ok() && r.points == r.lines;
            Ok(vec![CheckResult::judge(
                "rz-paramodular/base-pair",
                ok && r.points as u64 == q + 1 && r.superspecial as u64 == p2 + 1,
                json!({"points": q + 1, "superspecial": p2 + 1, "findings": 0}),
                &r,
                r.findings.samples.first().cloned(),
            )])
        });
        if cfg.d == 2 {
            if cfg.radius != 1 || q > 9 {
                return self.skip(&names[1..], "global census needs radius 1 and q <= 9");
            }
            self.group(&names[1..], || {
                let m = ParamModel::new(cfg.p, cfg.d, cfg.precision)?;
                let points = m.census(1)?;
                let r = m.census_report(&points)?;
                let it = m.pair_intersections(&points)?;
                Ok(vec![
                    findings_check("rz-paramodular/census", &r.findings, json!(r)),
                    findings_check("rz-paramodular/pair-intersections", &it.findings, json!(it)),
                ])
            });
        } else {
            self.skip(&names[1..2], "global census needs d <= 2");
            if q > 81 {
                return self.skip(&names[2..], "seeded intersections need q <= 81");
            }
            self.group(&names[2..], || {
                let m = ParamModel::new(cfg.p, cfg.d, cfg.precision)?;
                let pair = m.base_pair()?;
                let seeds = m.pair_stratum(&pair.l0.lat, &pair.l2.lat)?;
                let it = m.pair_intersections(&seeds)?;
                Ok(vec![findings_check("rz-paramodular/pair-intersections", &it.findings, json!(it))])
            });
        }
    }

    fn weyl_eo(&mut self) {
        let mut tables = serde_json::Map::new();
        for (case, key) in [(Case::Quaternionic, "quaternionic"), (Case::Paramodular, "paramodular")] {
            let got = weyl::eo_table(case);
            let want = weyl::expected_table(case);
            let name = format!("weyl-eo/table-{key}");
            let c = CheckResult::compare(&name, &want, &got, None);
            tables.insert(key.into(), json!(got));
            self.report.push(c);
        }
        self.report.tables = Value::Object(tables);
        self.group(&["weyl-eo/dimensions"], || {
            // lengths of the w_Sigma against the dimensions of the DL pieces
            let rows = weyl::expected_table(Case::Quaternionic);
            let lengths: BTreeSet<u32> = weyl::table_lengths(&rows).into_values().collect();
            let dims: BTreeSet<u32> =
                [StratumLabel::XP1, StratumLabel::XBw1, StratumLabel::XBw2].iter().filter_map(|l| l.dimension()).collect();
            Ok(vec![CheckResult::compare("weyl-eo/dimensions", dims, lengths, None)])
        });
        self.group(&["weyl-eo/braids"], || Ok(weyl_consistency()));
    }
}

fn pow(w: &AffineWeylElem, n: usize) -> AffineWeylElem {
    (0..n).fold(AffineWeylElem::identity(), |acc, _| acc.compose(w))
}

fn weyl_consistency() -> Vec<CheckResult> {
    use weyl::*;
    let mut out = Vec::new();
    let [s0, s1, s2] = simple_reflections();
    let e = AffineWeylElem::identity();
    let orders = [
        s0.compose(&s0) == e,
        s1.compose(&s1) == e && s2.compose(&s2) == e,
        pow(&s0.compose(&s1), 4) == e,
        pow(&s1.compose(&s2), 4) == e,
        pow(&s0.compose(&s2), 2) == e,
        pow(&s0.compose(&s1), 2) != e,
    ];
    out.push(CheckResult::compare("weyl-eo/braids", [true; 6], orders, None));
    let t = AffineWeylElem::translation(1, 1);
    out.push(CheckResult::compare("weyl-eo/translation-length", 3, length(&t), Some(t.to_string())));

    let adm = adm_set();
    let by_sub = adm_set_by_subwords();
    let small = ball(3);
    let not_closed = adm.iter().flat_map(|w| small.iter().filter(move |u| bruhat_leq(u, w))).find(|u| !adm.contains(u));
    let maxi: Vec<String> = maximal_elements(&adm).iter().map(|w| w.to_string()).collect();
    let trans: Vec<String> = maximal_translations().iter().map(|w| w.to_string()).collect();
    out.push(CheckResult::judge(
        "weyl-eo/adm-closure",
        not_closed.is_none() && maxi.len() == 4 && maxi == trans,
        json!({"downward_closed": true, "maximal": trans}),
        json!({"downward_closed": not_closed.is_none(), "maximal": maxi}),
        not_closed.map(|u| u.to_string()),
    ));
    out.push(CheckResult::compare(
        "weyl-eo/adm-strategies",
        json!({"bruhat": adm.len(), "subwords": adm.len(), "equal": true}),
        json!({"bruhat": adm.len(), "subwords": by_sub.len(), "equal": adm == by_sub}),
        None,
    ));

    let b4 = ball(4);
    let mut bad = None;
    let mut tested = 0usize;
    for k in [vec![0u8, 2], vec![0, 1], vec![1, 2], vec![0], vec![1], vec![2], vec![]] {
        let wk = parabolic_subgroup(&k);
        for w in &b4 {
            tested += 1;
            if bad.is_none() && in_min_coset_reps(w, &k) != is_coset_minimum_brute(w, &wk) {
                bad = Some(format!("{w} K={k:?}"));
            }
        }
    }
    out.push(CheckResult::judge("weyl-eo/coset-minima", bad.is_none(), "predicate == brute force", json!({"tested": tested}), bad));

    let eo = eo_set(&TABLE_K);
    let cox = |c: Case| {
        let a = DynkinAction::of(c);
        eo.iter().filter(|w| is_sigma_coxeter(w, &a)).map(|w| w.to_string()).collect::<Vec<_>>()
    };
    let mut got = BTreeMap::new();
    got.insert("eo", eo.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    got.insert("cox_quaternionic", cox(Case::Quaternionic));
    got.insert("cox_paramodular", cox(Case::Paramodular));
    let counts: BTreeMap<&str, usize> = got.iter().map(|(k, v)| (*k, v.len())).collect();
    out.push(CheckResult::judge(
        "weyl-eo/eo-set",
        counts["eo"] == 5 && counts["cox_quaternionic"] == 4 && counts["cox_paramodular"] == 2,
        json!({"eo": 5, "cox_quaternionic": 4, "cox_paramodular": 2}),
        got,
        None,
    ));
    out
}
