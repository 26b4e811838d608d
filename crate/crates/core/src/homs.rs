//! Homomorphisms from a finitely presented group into finite groups.
//!
//! Generator images are assigned in generator order; each relator is checked
//! as soon as its largest generator has an image. No symmetry reduction is
//! applied, so the searches count every homomorphism. The parallel path splits
//! on the image of the first generator and concatenates branch results in
//! element order, so output is identical to the serial path.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::budget::ExecMode;
use crate::error::{Error, Result};
use crate::finite::{FiniteGroup, SymmetricGroup};
use crate::par;
use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::word::Word;

/// A homomorphism into `Sym(degree)`, one image per source generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermHom {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl PermHom {
    pub fn evaluate(&self, w: &Word) -> Permutation {
        Permutation::evaluate(w, &self.images, self.degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(Permutation::is_identity)
    }

    /// True when every relator of `p` maps to the identity.
    pub fn respects(&self, p: &Presentation) -> bool {
        p.relators().iter().all(|r| self.evaluate(r).is_identity())
    }
}

#[derive(Debug)]
struct Exceeded;

/// Relators grouped by the generator whose assignment completes them.
fn relators_by_level(p: &Presentation) -> Vec<Vec<&Word>> {
    let mut levels = vec![Vec::new(); p.num_generators()];
    for r in p.relators() {
        if let Some(m) = r.max_generator() {
            levels[m].push(r);
        }
    }
    levels
}

struct Backtrack<'a, G: FiniteGroup + ?Sized> {
    group: &'a G,
    levels: Vec<Vec<&'a Word>>,
    max_nodes: u64,
    nodes: &'a AtomicU64,
}

impl<G: FiniteGroup + ?Sized> Backtrack<'_, G> {
    fn run(
        &self,
        assignment: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> std::result::Result<ControlFlow<()>, Exceeded> {
        let level = assignment.len();
        if level == self.levels.len() {
            return Ok(visit(assignment));
        }
        for x in 0..self.group.order() {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
                return Err(Exceeded);
            }
            assignment.push(x);
            let ok = self.levels[level]
                .iter()
                .all(|r| self.group.evaluate(r, assignment) == self.group.identity());
            if ok {
                if let ControlFlow::Break(()) = self.run(assignment, visit)? {
                    assignment.pop();
                    return Ok(ControlFlow::Break(()));
                }
            }
            assignment.pop();
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn exceeded(limit: u64) -> Error {
    Error::BudgetExceeded {
        what: "homomorphism search nodes",
        limit,
    }
}

/// Every homomorphism into `group` as a list of generator images, in
/// lexicographic order of image indices.
pub fn all_homs<G: FiniteGroup + ?Sized>(
    p: &Presentation,
    group: &G,
    max_nodes: u64,
    max_homs: u64,
    exec: ExecMode,
) -> Result<Vec<Vec<usize>>> {
    let nodes = AtomicU64::new(0);
    let found = AtomicU64::new(0);
    let levels = relators_by_level(p);
    if levels.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let search = Backtrack {
        group,
        levels,
        max_nodes,
        nodes: &nodes,
    };
    let over_limit = std::sync::atomic::AtomicBool::new(false);
    let branch = |first: &usize| -> std::result::Result<Vec<Vec<usize>>, Exceeded> {
        let mut out = Vec::new();
        if search.nodes.fetch_add(1, Ordering::Relaxed) >= max_nodes {
            return Err(Exceeded);
        }
        let mut assignment = vec![*first];
        let ok = search.levels[0]
            .iter()
            .all(|r| group.evaluate(r, &assignment) == group.identity());
        if !ok {
            return Ok(out);
        }
        let _ = search.run(&mut assignment, &mut |a| {
            if found.fetch_add(1, Ordering::Relaxed) >= max_homs {
                over_limit.store(true, Ordering::Relaxed);
                return ControlFlow::Break(());
            }
            out.push(a.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    };
    let firsts: Vec<usize> = (0..group.order()).collect();
    let results = par::map_ordered(exec, &firsts, branch);
    if over_limit.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            what: "homomorphism count",
            limit: max_homs,
        });
    }
    let mut all = Vec::new();
    for r in results {
        all.extend(r.map_err(|_| exceeded(max_nodes))?);
    }
    Ok(all)
}

/// `|Hom(p, group)|`.
pub fn count_homs_in<G: FiniteGroup + ?Sized>(
    p: &Presentation,
    group: &G,
    max_nodes: u64,
    exec: ExecMode,
) -> Result<u64> {
    let nodes = AtomicU64::new(0);
    let levels = relators_by_level(p);
    if levels.is_empty() {
        return Ok(1);
    }
    let search = Backtrack {
        group,
        levels,
        max_nodes,
        nodes: &nodes,
    };
    let branch = |first: &usize| -> std::result::Result<u64, Exceeded> {
        if search.nodes.fetch_add(1, Ordering::Relaxed) >= max_nodes {
            return Err(Exceeded);
        }
        let mut assignment = vec![*first];
        if !search.levels[0]
            .iter()
            .all(|r| group.evaluate(r, &assignment) == group.identity())
        {
            return Ok(0);
        }
        let mut count = 0u64;
        let _ = search.run(&mut assignment, &mut |_| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    };
    let firsts: Vec<usize> = (0..group.order()).collect();
    par::map_ordered(exec, &firsts, branch)
        .into_iter()
        .try_fold(0u64, |acc, r| r.map(|c| acc + c))
        .map_err(|_| exceeded(max_nodes))
}

/// Exact number of homomorphisms into a finite group.
pub fn count_homs<G: FiniteGroup + ?Sized>(p: &Presentation, target: &G, max_nodes: u64) -> Result<u64> {
    count_homs_in(p, target, max_nodes, ExecMode::Parallel)
}

/// First homomorphism (in search order) satisfying `pred`. Serial.
/// Returns `Ok(None)` when the search completes without a match and an error
/// when the node budget runs out first.
pub fn find_hom<G: FiniteGroup + ?Sized>(
    p: &Presentation,
    group: &G,
    max_nodes: u64,
    stop: &dyn crate::budget::Stop,
    mut pred: impl FnMut(&[usize]) -> bool,
) -> Result<Option<Vec<usize>>> {
    let nodes = AtomicU64::new(0);
    let levels = relators_by_level(p);
    if levels.is_empty() {
        return Ok(pred(&[]).then(Vec::new));
    }
    let search = Backtrack {
        group,
        levels,
        max_nodes,
        nodes: &nodes,
    };
    let mut hit = None;
    let mut assignment = Vec::new();
    let mut cancelled = false;
    let mut tick = 0u32;
    let _ = search
        .run(&mut assignment, &mut |a| {
            tick = tick.wrapping_add(1);
            if tick.is_multiple_of(256) && stop.stopped() {
                cancelled = true;
                return ControlFlow::Break(());
            }
            if pred(a) {
                hit = Some(a.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .map_err(|_| exceeded(max_nodes))?;
    if cancelled {
        return Err(Error::BudgetExceeded {
            what: "cancelled",
            limit: 0,
        });
    }
    Ok(hit)
}

/// The first `limit` homomorphisms in search order, serially, and whether
/// the list is complete. Running out of nodes returns what was found.
pub fn first_homs<G: FiniteGroup + ?Sized>(
    p: &Presentation,
    group: &G,
    max_nodes: u64,
    limit: usize,
) -> (Vec<Vec<usize>>, bool) {
    let nodes = AtomicU64::new(0);
    let levels = relators_by_level(p);
    if levels.is_empty() {
        return (vec![Vec::new()], true);
    }
    let search = Backtrack {
        group,
        levels,
        max_nodes,
        nodes: &nodes,
    };
    let mut out = Vec::new();
    let mut truncated = false;
    let r = search.run(&mut Vec::new(), &mut |a| {
        if out.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        out.push(a.to_vec());
        ControlFlow::Continue(())
    });
    let complete = r.is_ok() && !truncated;
    (out, complete)
}

/// All homomorphisms into `Sym(n)`, in lexicographic order of image lists.
/// Fails once more than `limit` homomorphisms exist.
pub fn enumerate_homs(p: &Presentation, n: usize, limit: u64) -> Result<Vec<PermHom>> {
    enumerate_homs_with(p, n, limit, u64::MAX, ExecMode::Parallel)
}

pub fn enumerate_homs_with(
    p: &Presentation,
    n: usize,
    limit: u64,
    max_nodes: u64,
    exec: ExecMode,
) -> Result<Vec<PermHom>> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let sym = SymmetricGroup::new(n)?;
    let raw = all_homs(p, &sym, max_nodes, limit, exec)?;
    Ok(raw
        .into_iter()
        .map(|imgs| PermHom {
            degree: n,
            images: imgs.into_iter().map(|r| sym.permutation(r)).collect(),
        })
        .collect())
}
