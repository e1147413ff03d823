//! Report structures shared by the JSON and text renderings.

use std::fmt::Write as _;

use serde::Serialize;
use toricfano::numcheck::OracleReport;
use toricfano::rational::{self, Rational};
use toricfano::{Fan, FanoVerdict, FlagManifold, Polytope};

use crate::config::BundleConfig;

pub fn q(x: &Rational) -> String {
    rational::to_string(x)
}

fn qs(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(q).collect()
}

fn tuple(xs: &[String]) -> String {
    format!("({})", xs.join(", "))
}

fn root_label(root: &[i64]) -> String {
    let parts: Vec<String> = root.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Debug, Serialize)]
pub struct RootValue {
    pub root: Vec<i64>,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct FlagSummary {
    pub root_system: String,
    pub rank: usize,
    pub crossed: Vec<usize>,
    pub center_dim: usize,
    pub r_m_plus_count: usize,
    pub h_v: Vec<String>,
    pub h_v_in_chamber: bool,
    pub h_v_margins: Vec<RootValue>,
}

impl FlagSummary {
    pub fn new(flag: &FlagManifold) -> Self {
        let margins = flag.chamber_margins(flag.h_v()).expect("h_V has full rank");
        let name: Vec<String> = flag
            .root_system()
            .components()
            .iter()
            .map(|c| c.to_string())
            .collect();
        Self {
            root_system: name.join("x"),
            rank: flag.rank(),
            crossed: flag.painting().crossed().iter().map(|i| i + 1).collect(),
            center_dim: flag.center_dim(),
            r_m_plus_count: flag.r_m_plus().len(),
            h_v: qs(flag.h_v().coords()),
            h_v_in_chamber: margins.iter().all(|(_, v)| rational::is_positive(v)),
            h_v_margins: margins
                .into_iter()
                .map(|(i, v)| RootValue {
                    root: flag.root(i).to_vec(),
                    value: q(&v),
                })
                .collect(),
        }
    }

    fn render(&self, out: &mut String) {
        let crossed: Vec<String> = self.crossed.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "flag: {} crossed {{{}}}",
            self.root_system,
            crossed.join(", ")
        );
        let _ = writeln!(
            out,
            "  |R_m+| = {}, dim z(k) = {}",
            self.r_m_plus_count, self.center_dim
        );
        let _ = writeln!(out, "  h_V = {}", tuple(&self.h_v));
        let _ = writeln!(out, "  h_V in chamber: {}", yes_no(self.h_v_in_chamber));
    }

    fn render_margins(&self, out: &mut String) {
        let _ = writeln!(out, "h_V margins:");
        for m in &self.h_v_margins {
            let _ = writeln!(out, "  {:<24} {}", root_label(&m.root), m.value);
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VertexOut {
    pub cone: usize,
    pub coords: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FiberSummary {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub smooth: bool,
    pub complete: bool,
    pub fano: bool,
    pub vertices: Vec<VertexOut>,
}

impl FiberSummary {
    pub fn new(fan: &Fan, polytope: &Polytope, fano: bool) -> Self {
        let diag = fan.validate();
        Self {
            dim: fan.dim(),
            rays: fan.rays().to_vec(),
            max_cones: fan.max_cones().to_vec(),
            smooth: diag.smooth,
            complete: diag.complete,
            fano,
            vertices: polytope
                .vertices()
                .iter()
                .map(|v| VertexOut {
                    cone: v.cone,
                    coords: qs(&v.coords),
                })
                .collect(),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "fiber: dim {}, {} rays, {} maximal cones; smooth {}, complete {}, Fano {}",
            self.dim,
            self.rays.len(),
            self.max_cones.len(),
            yes_no(self.smooth),
            yes_no(self.complete),
            yes_no(self.fano)
        );
        let _ = writeln!(out, "polytope vertices:");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  {i:>3}  cone {:<3} {}", v.cone, tuple(&v.coords));
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MarginOut {
    pub vertex: usize,
    pub root: Vec<i64>,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictOut {
    pub is_fano: bool,
    pub fiber_fano: bool,
    pub tau_surjective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_integral: Option<bool>,
    pub min_margin: Option<String>,
    pub violations: usize,
}

#[derive(Debug, Serialize)]
pub struct OracleOut {
    pub m: usize,
    pub fixed_point_error: f64,
    pub exact_vertices_match: bool,
    pub samples: usize,
    pub halfspace_violation: f64,
    pub near_vertex_error: f64,
    pub barycenter: Vec<f64>,
    pub barycenter_norm: f64,
}

impl From<OracleReport> for OracleOut {
    fn from(r: OracleReport) -> Self {
        Self {
            m: r.m,
            fixed_point_error: r.fixed_point_error,
            exact_vertices_match: r.exact_vertices_match,
            samples: r.samples,
            halfspace_violation: r.halfspace_violation,
            near_vertex_error: r.near_vertex_error,
            barycenter: r.barycenter,
            barycenter_norm: r.barycenter_norm,
        }
    }
}

impl OracleOut {
    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "numerical oracle (CP{}):", self.m);
        let _ = writeln!(
            out,
            "  fixed-point error      {:.3e}",
            self.fixed_point_error
        );
        let _ = writeln!(
            out,
            "  exact vertices match   {}",
            yes_no(self.exact_vertices_match)
        );
        let _ = writeln!(
            out,
            "  halfspace violation    {:.3e} over {} samples",
            self.halfspace_violation, self.samples
        );
        let _ = writeln!(
            out,
            "  near-vertex error      {:.3e}",
            self.near_vertex_error
        );
        let _ = writeln!(out, "  barycenter norm        {:.3e}", self.barycenter_norm);
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub config: BundleConfig,
    pub flag: FlagSummary,
    pub fiber: FiberSummary,
    pub verdict: VerdictOut,
    pub margins: Vec<MarginOut>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOut>,
}

impl CheckReport {
    pub fn new(
        config: &BundleConfig,
        flag: &FlagManifold,
        fan: &Fan,
        verdict: &FanoVerdict,
        tau_integral: Option<bool>,
    ) -> Self {
        Self {
            config: config.clone(),
            flag: FlagSummary::new(flag),
            fiber: FiberSummary::new(fan, &verdict.polytope, verdict.fiber_fano),
            verdict: VerdictOut {
                is_fano: verdict.is_fano,
                fiber_fano: verdict.fiber_fano,
                tau_surjective: verdict.tau_surjective,
                tau_integral,
                min_margin: verdict.min_margin().map(q),
                violations: verdict.violations.len(),
            },
            margins: verdict
                .margins
                .iter()
                .map(|m| MarginOut {
                    vertex: m.vertex,
                    root: flag.root(m.root).to_vec(),
                    value: q(&m.value),
                })
                .collect(),
            warnings: Vec::new(),
            oracle: None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        render_config(&self.config, &mut out);
        self.flag.render(&mut out);
        self.fiber.render(&mut out);
        let v = &self.verdict;
        let _ = writeln!(
            out,
            "verdict: {}",
            if v.is_fano { "Fano" } else { "not Fano" }
        );
        let _ = writeln!(out, "  fiber Fano: {}", yes_no(v.fiber_fano));
        let _ = writeln!(out, "  tau surjective: {}", yes_no(v.tau_surjective));
        if let Some(t) = v.tau_integral {
            let _ = writeln!(out, "  tau integral: {}", yes_no(t));
        }
        let _ = writeln!(
            out,
            "  min margin: {}",
            v.min_margin.as_deref().unwrap_or("-")
        );
        let _ = writeln!(out, "  violations: {}", v.violations);
        let _ = writeln!(out, "margins:");
        let _ = writeln!(out, "  {:>6}  {:<24} value", "vertex", "root");
        for m in &self.margins {
            let _ = writeln!(
                out,
                "  {:>6}  {:<24} {}",
                m.vertex,
                root_label(&m.root),
                m.value
            );
        }
        if let Some(o) = &self.oracle {
            o.render(&mut out);
        }
        render_warnings(&self.warnings, &mut out);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct PolytopeReport {
    pub config: BundleConfig,
    pub fiber: FiberSummary,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOut>,
}

impl PolytopeReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_config(&self.config, &mut out);
        self.fiber.render(&mut out);
        if let Some(o) = &self.oracle {
            o.render(&mut out);
        }
        render_warnings(&self.warnings, &mut out);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct FlagReport {
    pub config: BundleConfig,
    pub flag: FlagSummary,
    pub warnings: Vec<String>,
}

impl FlagReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_config(&self.config, &mut out);
        self.flag.render(&mut out);
        self.flag.render_margins(&mut out);
        render_warnings(&self.warnings, &mut out);
        out
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_config(config: &BundleConfig, out: &mut String) {
    let json = serde_json::to_string(config).expect("config serializes");
    let _ = writeln!(out, "config: {json}");
}

pub fn render_warnings(warnings: &[String], out: &mut String) {
    for w in warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
