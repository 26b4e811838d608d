//! Finite groups given by multiplication tables, and the shipped catalog.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::word::Word;

/// A finite group whose elements are `0..order`.
pub trait FiniteGroup: Sync {
    fn name(&self) -> &str;
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn label(&self, a: usize) -> String;

    /// Left-to-right product of the images of a word's letters.
    fn evaluate(&self, w: &Word, images: &[usize]) -> usize {
        let mut acc = self.identity();
        for l in w.letters() {
            let x = images[l.generator()];
            acc = self.mul(acc, if l.is_inverse() { self.inv(x) } else { x });
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    labels: Vec<String>,
    table: Vec<u16>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates the group axioms and builds the table.
    pub fn new(name: impl Into<String>, labels: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(name.into(), labels, rows, true)
    }

    fn build(name: String, labels: Vec<String>, rows: Vec<Vec<usize>>, check_associativity: bool) -> Result<Self> {
        let bad = |reason: String| Error::InvalidTable {
            name: name.clone(),
            reason,
        };
        let n = rows.len();
        if n == 0 {
            return Err(bad("empty table".into()));
        }
        if n > u16::MAX as usize {
            return Err(bad("table too large".into()));
        }
        if labels.len() != n {
            return Err(bad(format!("{} labels for {n} elements", labels.len())));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(bad(format!("row {i} has {} entries", r.len())));
            }
            let mut seen = vec![false; n];
            for &x in r {
                if x >= n || seen[x] {
                    return Err(bad(format!("row {i} is not a permutation of the elements")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for r in &rows {
                if seen[r[j]] {
                    return Err(bad(format!("column {j} is not a permutation of the elements")));
                }
                seen[r[j]] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| bad("no identity element".into()))?;
        for a in (0..n).filter(|_| check_associativity) {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| rows[a][b] == identity).expect("latin square"))
            .collect();
        let table = rows.iter().flatten().map(|&x| x as u16).collect();
        Ok(FiniteGroupTable {
            name,
            labels,
            table,
            identity,
            inverses,
        })
    }

    /// The group generated by some permutations, elements sorted by image list.
    pub fn from_permutations(name: impl Into<String>, generators: &[Permutation], degree: usize) -> Result<Self> {
        let mut elems = vec![Permutation::identity(degree)];
        let mut set: std::collections::HashSet<Permutation> = elems.iter().cloned().collect();
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let y = elems[i].then(g);
                if set.insert(y.clone()) {
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort();
        Self::from_sorted_permutations(name, &elems)
    }

    fn from_sorted_permutations(name: impl Into<String>, elems: &[Permutation]) -> Result<Self> {
        let index: std::collections::HashMap<&Permutation, usize> =
            elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let rows = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&a.then(b)]).collect())
            .collect();
        let labels = elems
            .iter()
            .map(|p| p.images().iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        // composition of permutations is associative
        Self::build(name.into(), labels, rows, false)
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(format!("C{n}"), (0..n).map(|i| i.to_string()).collect(), rows).expect("cyclic group table")
    }

    /// All permutations of degree `n` in lexicographic order of image lists.
    pub fn symmetric(n: usize) -> Self {
        let mut elems = Vec::new();
        let mut cur: Vec<u32> = (0..n as u32).collect();
        loop {
            elems.push(Permutation::from_images(cur.clone()).expect("permutation"));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        Self::from_sorted_permutations(format!("Sym{n}"), &elems).expect("symmetric group table")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element whose label is `label`.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn row(&self, a: usize) -> Vec<usize> {
        let n = self.order();
        self.table[a * n..(a + 1) * n].iter().map(|&x| x as usize).collect()
    }

    /// Order of the subgroup generated by `gens`.
    pub fn subgroup_order(&self, gens: &[usize]) -> usize {
        self.subgroup(gens).len()
    }

    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut elems = vec![self.identity];
        seen[self.identity] = true;
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = self.mul(elems[i], g);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// Renders the table in the catalog text format.
    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut out = format!("group {}\nlabels: {}\n", self.name, self.labels.join(", "));
        for a in 0..n {
            let row: Vec<String> = self.row(a).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

impl FiniteGroup for FiniteGroupTable {
    fn name(&self) -> &str {
        &self.name
    }

    fn order(&self) -> usize {
        self.labels.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.labels.len() + b] as usize
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Symmetric group of any degree, elements indexed by the lexicographic rank
/// of their image lists. Degrees up to [`SymmetricGroup::TABLE_DEGREE`] use a
/// precomputed table.
pub struct SymmetricGroup {
    degree: usize,
    order: usize,
    table: Option<FiniteGroupTable>,
    name: String,
}

impl SymmetricGroup {
    pub const TABLE_DEGREE: usize = 6;
    pub const MAX_DEGREE: usize = 12;

    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 || degree > Self::MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "symmetric group degree must be in 1..={}",
                Self::MAX_DEGREE
            )));
        }
        let order = (1..=degree).product();
        let table = (degree <= Self::TABLE_DEGREE).then(|| FiniteGroupTable::symmetric(degree));
        Ok(SymmetricGroup {
            degree,
            order,
            table,
            name: format!("Sym{degree}"),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn permutation(&self, rank: usize) -> Permutation {
        let mut pool: Vec<u32> = (0..self.degree as u32).collect();
        let mut images = Vec::with_capacity(self.degree);
        let mut r = rank;
        for k in (0..self.degree).rev() {
            let f: usize = (1..=k).product();
            let idx = r / f;
            r %= f;
            images.push(pool.remove(idx));
        }
        Permutation::from_images(images).expect("unranked permutation")
    }

    pub fn rank(&self, p: &Permutation) -> usize {
        let imgs = p.images();
        let n = imgs.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = imgs[i + 1..].iter().filter(|&&x| x < imgs[i]).count();
            let f: usize = (1..n - i).product();
            rank += smaller * f;
        }
        rank
    }
}

impl FiniteGroup for SymmetricGroup {
    fn name(&self) -> &str {
        &self.name
    }

    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t.mul(a, b),
            None => self.rank(&self.permutation(a).then(&self.permutation(b))),
        }
    }

    fn inv(&self, a: usize) -> usize {
        match &self.table {
            Some(t) => t.inv(a),
            None => self.rank(&self.permutation(a).inverse()),
        }
    }

    fn label(&self, a: usize) -> String {
        self.permutation(a).to_string()
    }
}

/// Parses catalog text: blocks of `group NAME`, `labels: l0, l1, ...`, table
/// rows, `end`. Every table is validated.
pub fn parse_catalog(text: &str) -> Result<Vec<FiniteGroupTable>> {
    let mut out = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    while let Some((ln, line)) = lines.next() {
        let name = line
            .strip_prefix("group ")
            .ok_or_else(|| Error::parse(ln, 1, "expected `group NAME`"))?
            .trim()
            .to_string();
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln, 1, "missing `labels:`"))?;
        let labels: Vec<String> = line
            .strip_prefix("labels:")
            .ok_or_else(|| Error::parse(ln, 1, "expected `labels:`"))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        loop {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(ln, 1, "unterminated group table"))?;
            if line == "end" {
                break;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(ln, 1, format!("bad entry `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        out.push(FiniteGroupTable::new(name, labels, rows)?);
    }
    Ok(out)
}

const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

/// The fingerprint catalog: C2..C6, Sym3, Sym4, D4, Q8, A4.
pub fn catalog() -> &'static [Arc<FiniteGroupTable>] {
    static CATALOG: OnceLock<Vec<Arc<FiniteGroupTable>>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        parse_catalog(CATALOG_TEXT)
            .expect("shipped catalog is valid")
            .into_iter()
            .map(Arc::new)
            .collect()
    })
}

pub fn catalog_group(name: &str) -> Option<Arc<FiniteGroupTable>> {
    catalog().iter().find(|g| g.name() == name).cloned()
}
