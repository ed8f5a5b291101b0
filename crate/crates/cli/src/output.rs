//! JSON shapes written by the subcommands.

use mdepth::{EdgeSource, Hyperplane, Region2D, RiskReport};
use serde::Serialize;

#[derive(Serialize)]
pub struct HalfspaceJson {
    pub u: Vec<f64>,
    pub theta: f64,
}

impl From<&Hyperplane<f64>> for HalfspaceJson {
    fn from(h: &Hyperplane<f64>) -> Self {
        HalfspaceJson { u: h.u.as_slice().to_vec(), theta: h.theta }
    }
}

#[derive(Serialize)]
pub struct ClipBoxJson {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

/// Where a polygon edge comes from: a halfspace index, or `"box"` for the
/// artificial clip box.
#[derive(Serialize)]
#[serde(untagged)]
pub enum EdgeJson {
    Halfspace(usize),
    Box(&'static str),
}

#[derive(Serialize)]
pub struct RegionJson {
    pub loss: String,
    pub alpha: f64,
    pub directions: usize,
    pub empty: bool,
    pub clipped: bool,
    pub area: f64,
    pub barycenter: Option<[f64; 2]>,
    pub vertices: Vec<[f64; 2]>,
    pub edge_sources: Vec<EdgeJson>,
    pub clip_box: ClipBoxJson,
    pub halfspaces: Vec<HalfspaceJson>,
}

impl RegionJson {
    pub fn new(region: &Region2D<f64>, loss: String, alpha: f64) -> Self {
        let b = &region.clip_box;
        RegionJson {
            loss,
            alpha,
            directions: region.halfspaces.len(),
            empty: region.is_empty(),
            clipped: region.is_clipped(),
            area: region.area(),
            barycenter: region.barycenter(),
            vertices: region.vertices.clone(),
            edge_sources: region
                .edge_sources
                .iter()
                .map(|s| match s {
                    EdgeSource::Halfspace(i) => EdgeJson::Halfspace(*i),
                    EdgeSource::ClipBox => EdgeJson::Box("box"),
                })
                .collect(),
            clip_box: ClipBoxJson { xmin: b.xmin, xmax: b.xmax, ymin: b.ymin, ymax: b.ymax },
            halfspaces: region.halfspaces.iter().map(HalfspaceJson::from).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct QuantileJson {
    pub column: String,
    pub loss: String,
    pub alpha: f64,
    pub theta: f64,
    pub n: usize,
}

#[derive(Serialize)]
pub struct DepthJson {
    pub point: Vec<f64>,
    pub depth: f64,
    pub argmin_u: Vec<f64>,
    pub method: &'static str,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Serialize)]
pub struct MedianJson {
    pub loss: String,
    pub median: Vec<f64>,
}

#[derive(Serialize)]
pub struct RiskHalfspaceJson {
    pub alpha: f64,
    pub u: Vec<f64>,
    pub theta: f64,
}

#[derive(Serialize)]
pub struct RiskReportJson {
    pub check: &'static str,
    pub alpha: f64,
    pub u: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub tolerance: f64,
}

impl RiskReportJson {
    pub fn new(check: &'static str, r: &RiskReport<f64>) -> Self {
        RiskReportJson {
            check,
            alpha: r.alpha,
            u: r.u.clone(),
            lhs: r.lhs,
            rhs: r.rhs,
            holds: r.holds,
            tolerance: r.tolerance,
        }
    }
}

#[derive(Serialize)]
pub struct ConditionalRegionJson {
    pub x: Vec<f64>,
    pub alpha: f64,
    pub engine: String,
    pub empty: bool,
    pub clipped: bool,
    pub vertices: Vec<[f64; 2]>,
    pub halfspaces: Vec<HalfspaceJson>,
}

#[derive(Serialize)]
pub struct MeanTestJson {
    pub mu0: Vec<f64>,
    pub depth: f64,
    pub statistic: f64,
    pub argmin_u: Vec<f64>,
    pub n: usize,
}
