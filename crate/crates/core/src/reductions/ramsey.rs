//! Reductions into and between the Ramsey problems.

use std::sync::Arc;

use serde_json::Value;

use crate::function::{ceil_log2, Function};
use crate::problems::{
    set_distance, verify, Certificate, EdgeColoring, Instance, Kind, LongChoiceInstance,
    LongChoiceVariant, RamseyRInstance, DESK_SCALE_BITS,
};
use crate::solvers::extract_clique;

use super::{mismatch, unexpected, Outcome, Pullback, ReduceError, Reduction};

type SharedColoring = Arc<dyn EdgeColoring + Send + Sync>;

fn edge_coloring(src: &Instance) -> Option<SharedColoring> {
    match src {
        Instance::Ramsey2(g) => Some(Arc::new(g.clone())),
        Instance::RamseyR(g) => Some(Arc::new(g.clone())),
        _ => None,
    }
}

/// Predicate `i` reads bit `i - k` of `color(a_k, x)`, `k` the greatest
/// multiple of `log2 r` not above `i`. The certificate is subsampled at
/// every `log2 r`-th element and pigeonholed by forward color.
#[derive(Debug, Clone, Copy)]
pub struct RamseyToLongChoice {
    pub source: Kind,
}

impl RamseyToLongChoice {
    fn coloring(&self, src: &Instance) -> Result<SharedColoring, ReduceError> {
        match edge_coloring(src) {
            Some(g) if src.kind() == self.source => Ok(g),
            _ => Err(mismatch(self.source, src)),
        }
    }
}

impl Reduction for RamseyToLongChoice {
    fn name(&self) -> &'static str {
        match self.source {
            Kind::Ramsey2 => "ramsey2->long_choice",
            _ => "ramsey_r->long_choice",
        }
    }

    fn source(&self) -> Kind {
        self.source
    }

    fn target(&self) -> Kind {
        Kind::LongChoice
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let g = self.coloring(src)?;
        let (w, n, r) = (g.node_width(), g.target(), g.colors());
        let bits = ceil_log2(r);
        if bits == 0 {
            if w < 63 && (n as u64) <= 1u64 << w {
                return Ok(Outcome::Immediate(Certificate::Clique {
                    color: 0,
                    nodes: (0..n as u64).collect(),
                }));
            }
            return Err(ReduceError::Precondition(
                "fewer nodes than the clique target".into(),
            ));
        }
        let kept = r as usize * (n - 1) + 1;
        if (kept - 1) * bits + 1 > w {
            return Err(ReduceError::Precondition(format!(
                "node width {w} cannot fit {kept} subsampled nodes at {bits} bits per color"
            )));
        }
        let mut ks = Vec::with_capacity(w - 1);
        let predicates = (0..w - 1)
            .map(|i| {
                let k = i / bits * bits;
                ks.push(k);
                let g = Arc::clone(&g);
                Function::from_args_fn(
                    format!("color bit {} of (a_{k}, x)", i - k),
                    w,
                    i + 2,
                    1,
                    move |args| {
                        let (a, x) = (args[k], args[i + 1]);
                        if a == x {
                            0
                        } else {
                            (g.edge_color(a, x) >> (i - k)) & 1
                        }
                    },
                )
            })
            .collect();
        let target = LongChoiceInstance::new(w, LongChoiceVariant::Binary(ks), predicates)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let g = self.coloring(src)?;
        let Certificate::ChoiceSeq(seq) = cert else {
            return Err(unexpected(self.name(), cert));
        };
        let (w, n, r) = (g.node_width(), g.target(), g.colors());
        let bits = ceil_log2(r).max(1);
        if seq.len() != w + 1 {
            return Err(unexpected(self.name(), cert));
        }
        let subsample: Vec<u64> = (0..r as usize * (n - 1) + 1)
            .map(|m| seq[m * bits])
            .collect();
        let colors: Vec<u64> = subsample
            .windows(2)
            .map(|p| g.edge_color(p[0], p[1]))
            .collect();
        Ok(extract_clique(&subsample, &colors, r, n)?.into())
    }
}

/// Indices become nodes; an edge between two distinct valid sets is colored
/// by their distance minus one, any other edge gets color 0. The clique
/// target is `k^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SunflowerToRamsey;

impl Reduction for SunflowerToRamsey {
    fn name(&self) -> &'static str {
        "sunflower->ramsey"
    }

    fn source(&self) -> Kind {
        Kind::Sunflower
    }

    fn target(&self) -> Kind {
        Kind::RamseyR
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::Sunflower(s) = src else {
            return Err(mismatch(Kind::Sunflower, src));
        };
        if s.k < 2 {
            return Err(ReduceError::Precondition(
                "sets must have at least 2 elements".into(),
            ));
        }
        if s.index_width > DESK_SCALE_BITS {
            return Err(ReduceError::DeskScale(format!(
                "index width {} exceeds {DESK_SCALE_BITS} bits; supply a narrower family",
                s.index_width
            )));
        }
        let r = (s.k as u64).next_power_of_two();
        let w = s.index_width;
        let fam = s.clone();
        let color =
            Function::from_args_fn("set distance", w, 2, ceil_log2(r), move |args| {
                match (fam.set(args[0]), fam.set(args[1])) {
                    (Some(a), Some(b)) if a != b => set_distance(&a, &b) as u64 - 1,
                    _ => 0,
                }
            });
        let target = RamseyRInstance::new(r, s.target(), w, color)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::Sunflower(s) = src else {
            return Err(mismatch(Kind::Sunflower, src));
        };
        let Certificate::Clique { nodes, .. } = cert else {
            return Err(unexpected(self.name(), cert));
        };
        let mut sets = Vec::with_capacity(nodes.len());
        for &i in nodes {
            match s.set(i) {
                None => return Ok(Certificate::SunflowerError(i).into()),
                Some(set) => sets.push(set),
            }
        }
        for p in 0..sets.len() {
            if let Some(q) = (p + 1..sets.len()).find(|&q| sets[q] == sets[p]) {
                return Ok(Certificate::SunflowerDup(nodes[p], nodes[q]).into());
            }
        }
        let flower = Certificate::Sunflower(nodes.clone());
        let report = verify(src, &flower);
        if !report.accepted {
            return Err(ReduceError::Internal(format!(
                "{}: equidistant family is no sunflower: {report}",
                self.name()
            )));
        }
        Ok(flower.into())
    }
}

/// Concrete stand-in for `n^δ` colors: `colors` is the width `m` of the
/// compressed images and `target` the clique size sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamseyHammingConfig {
    pub colors: usize,
    pub target: usize,
}

impl RamseyHammingConfig {
    /// Checks, for images of width `m` over `2^n` nodes: at least two
    /// colors; more clique nodes than equidistant points fit in `{0,1}^m`;
    /// and enough nodes that one image class alone holds a clique.
    pub fn new(n: usize, m: usize, target: usize) -> Result<Self, ReduceError> {
        if m < 2 {
            return Err(ReduceError::Precondition(format!(
                "color count m = {m} must be at least 2"
            )));
        }
        if target <= m + 1 {
            return Err(ReduceError::Precondition(format!(
                "clique target {target} must exceed m + 1 = {}",
                m + 1
            )));
        }
        let need = (target as u128 - 1) << m;
        if n >= 64 || (1u128 << n) <= need {
            return Err(ReduceError::Precondition(format!(
                "2^n = 2^{n} must exceed (target - 1) * 2^m = {need}"
            )));
        }
        Ok(RamseyHammingConfig { colors: m, target })
    }

    /// Smallest admissible target, `m + 2`.
    pub fn derived(n: usize, m: usize) -> Result<Self, ReduceError> {
        Self::new(n, m, m + 2)
    }

    /// The `δ` with `n^δ = colors`.
    pub fn delta(&self, n: usize) -> f64 {
        (self.colors as f64).ln() / (n as f64).ln()
    }

    /// Color of edges between equal images, `⌈m/2⌉` shifted to 0-based.
    pub fn sentinel(&self) -> u64 {
        self.colors.div_ceil(2) as u64 - 1
    }
}

/// Edge color is the Hamming distance of the two images minus one, or a
/// fixed sentinel when the images are equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeakCollisionToHamming {
    pub config: Option<RamseyHammingConfig>,
}

impl WeakCollisionToHamming {
    fn config(&self, n: usize, m: usize) -> Result<RamseyHammingConfig, ReduceError> {
        match self.config {
            Some(c) => RamseyHammingConfig::new(n, m, c.target).and_then(|checked| {
                if c.colors == m {
                    Ok(checked)
                } else {
                    Err(ReduceError::Precondition(format!(
                        "config has {} colors, images have {m} bits",
                        c.colors
                    )))
                }
            }),
            None => RamseyHammingConfig::derived(n, m),
        }
    }
}

impl Reduction for WeakCollisionToHamming {
    fn name(&self) -> &'static str {
        "weak_collision->ramsey_hamming"
    }

    fn source(&self) -> Kind {
        Kind::WeakCollision
    }

    fn target(&self) -> Kind {
        Kind::RamseyR
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::WeakCollision(c) = src else {
            return Err(mismatch(Kind::WeakCollision, src));
        };
        let cfg = self.config(c.n, c.m)?;
        let r = (cfg.colors as u64).next_power_of_two();
        let (f, sentinel) = (c.f.clone(), cfg.sentinel());
        let color = Function::from_args_fn("hamming distance", c.n, 2, ceil_log2(r), move |args| {
            let (x, y) = (f.call(args[0]), f.call(args[1]));
            if x == y {
                sentinel
            } else {
                (x ^ y).count_ones() as u64 - 1
            }
        });
        let target = RamseyRInstance::new(r, cfg.target, c.n, color)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: serde_json::json!({"colors": cfg.colors, "target": cfg.target}),
        })
    }

    fn pullback(
        &self,
        src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        let Instance::WeakCollision(c) = src else {
            return Err(mismatch(Kind::WeakCollision, src));
        };
        let Certificate::Clique { color, nodes } = cert else {
            return Err(unexpected(self.name(), cert));
        };
        let cfg = self.config(c.n, c.m)?;
        if *color != cfg.sentinel() {
            return Err(ReduceError::Internal(format!(
                "{}: a clique of {} equidistant images in {} bits",
                self.name(),
                nodes.len(),
                c.m
            )));
        }
        let images: Vec<u64> = nodes.iter().map(|&v| c.f.call(v)).collect();
        for p in 0..nodes.len() {
            if let Some(q) = (p + 1..nodes.len()).find(|&q| images[q] == images[p]) {
                return Ok(Certificate::Collision(nodes[p], nodes[q]).into());
            }
        }
        Err(ReduceError::Internal(format!(
            "{}: sentinel clique without a collision",
            self.name()
        )))
    }
}

/// Node `v` stands for the integer `v + 1`; edge `x < y` takes the color of
/// `y - x`. A monochromatic triangle `a < b < c` gives `(b-a) + (c-b) = c-a`.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeakSchurToRamsey;

impl Reduction for WeakSchurToRamsey {
    fn name(&self) -> &'static str {
        "weak_schur->ramsey"
    }

    fn source(&self) -> Kind {
        Kind::WeakSchur
    }

    fn target(&self) -> Kind {
        Kind::RamseyR
    }

    fn forward(&self, src: &Instance) -> Result<Outcome, ReduceError> {
        let Instance::WeakSchur(s) = src else {
            return Err(mismatch(Kind::WeakSchur, src));
        };
        let r = s.r.next_power_of_two();
        let schur = s.clone();
        let color =
            Function::from_args_fn("difference color", s.width, 2, ceil_log2(r), move |args| {
                let (lo, hi) = (args[0].min(args[1]), args[0].max(args[1]));
                if lo == hi {
                    0
                } else {
                    schur.color(hi - lo)
                }
            });
        let target = RamseyRInstance::new(r, 3, s.width, color)?;
        Ok(Outcome::Reduced {
            target: target.into(),
            aux: Value::Null,
        })
    }

    fn pullback(
        &self,
        _src: &Instance,
        _aux: &Value,
        cert: &Certificate,
    ) -> Result<Pullback, ReduceError> {
        match cert {
            Certificate::Clique { nodes, .. } if nodes.len() == 3 => {
                let mut v = nodes.clone();
                v.sort_unstable();
                Ok(Certificate::SchurTriple(v[1] - v[0], v[2] - v[1]).into())
            }
            _ => Err(unexpected(self.name(), cert)),
        }
    }
}
