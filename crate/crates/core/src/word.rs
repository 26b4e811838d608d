//! Words over a finite alphabet with formal inverses.

use std::fmt;

/// A signed generator. Encoded as `2 * generator + inverted`, so the natural
/// ordering on the code is `a < a^-1 < b < b^-1 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        Letter((generator as u32) << 1 | inverted as u32)
    }

    pub fn gen(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn inv(generator: usize) -> Self {
        Self::new(generator, true)
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 or -1.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

/// A word in the free group. Not necessarily reduced; see [`Word::free_reduce`].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word from raw letters without reducing.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Builds a freely reduced word.
    pub fn reduced(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reducing(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    /// `g^exp` for a single generator.
    pub fn power(generator: usize, exp: i64) -> Self {
        let l = Letter::new(generator, exp < 0);
        Word {
            letters: vec![l; exp.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index mentioned, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator()).max()
    }

    pub fn mentions(&self, generator: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == generator)
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.letters.iter().filter(|l| l.generator() == generator).count()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    /// The unique freely reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        Word::reduced(self.letters.iter().copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by free reduction at the seam. Both inputs are
    /// assumed reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reducing(&mut out, l);
        }
        Word { letters: out }
    }

    /// Raw concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `c * self * c^-1`, reduced.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.mul(self).mul(&c.inverse())
    }

    /// Strips matching inverse pairs from both ends. The input is freely
    /// reduced first.
    pub fn cyclic_reduce(&self) -> Word {
        let r = self.free_reduce();
        let l = &r.letters;
        let mut i = 0;
        let mut j = l.len();
        while j - i >= 2 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word {
            letters: l[i..j].to_vec(),
        }
    }

    /// Rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Lexicographically least cyclic rotation, and the rotation offset.
    pub fn least_rotation(&self) -> (Word, usize) {
        let n = self.letters.len();
        if n == 0 {
            return (self.clone(), 0);
        }
        let mut best = 0;
        for k in 1..n {
            if cmp_rotations(&self.letters, k, best) == std::cmp::Ordering::Less {
                best = k;
            }
        }
        (self.rotate(best), best)
    }

    /// Substitutes `images[g]` for every occurrence of generator `g` and
    /// reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.letters {
            let img = &images[l.generator()];
            if l.is_inverse() {
                for &m in img.letters.iter().rev() {
                    push_reducing(&mut out, m.inverse());
                }
            } else {
                for &m in &img.letters {
                    push_reducing(&mut out, m);
                }
            }
        }
        Word { letters: out }
    }

    /// Exponent sum of each generator, for a word over `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.letters {
            v[l.generator()] += l.sign();
        }
        v
    }

    /// Renames generators through `map` (old index to new index).
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(map[l.generator()], l.is_inverse()))
                .collect(),
        }
    }

    /// Renders the word with the given generator names, collapsing runs into
    /// exponents (`a a a` becomes `a^3`, `a^-1 a^-1` becomes `a^-2`). The
    /// empty word renders as `1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

fn cmp_rotations(l: &[Letter], a: usize, b: usize) -> std::cmp::Ordering {
    let n = l.len();
    for t in 0..n {
        let x = l[(a + t) % n];
        let y = l[(b + t) % n];
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

#[inline]
fn push_reducing(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = &self.names[l.generator()];
            let exp = run as i64 * l.sign();
            if exp == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Every freely reduced word over `n` generators with length exactly `len`,
/// in shortlex order.
pub fn reduced_words_of_length(n: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::with_capacity(len);
    fn rec(n: usize, len: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(Word::from_letters(cur.clone()));
            return;
        }
        for code in 0..(2 * n) as u32 {
            let l = Letter(code);
            if cur.last() == Some(&l.inverse()) {
                continue;
            }
            cur.push(l);
            rec(n, len, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        if len == 0 {
            out.push(Word::empty());
        }
        return out;
    }
    rec(n, len, &mut cur, &mut out);
    out
}

/// Freely reduced words of length at most `max_len`, shortest first.
pub fn reduced_words_up_to(n: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|len| reduced_words_of_length(n, len)).collect()
}
