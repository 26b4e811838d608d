//! Shared fixtures: seed groups and recorded random Tietze moves.
#![allow(dead_code)]

pub mod oracle;

use dehnfill_core::format::parse_group_file;
use dehnfill_core::tietze::{apply_tietze_marked, Derivation, Factor, TietzeMove};
use dehnfill_core::word::reduced_words_of_length;
use dehnfill_core::wordproblem::{decide_word, WpVerdict};
use dehnfill_core::{Budgets, MarkedGroup, Presentation, Word};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SEEDS: [&str; 5] = [
    "group F2
  gens: a, b
  rels:
  peripheral A
    gens: x
    rels:
    embed: x -> a
  end
  peripheral B
    gens: x
    rels:
    embed: x -> b
  end
end
",
    "group Z2
  gens: a, b
  rels: a b a^-1 b^-1
  peripheral T
    gens: x, y
    rels: x y x^-1 y^-1
    embed: x -> a, y -> b
  end
end
",
    "group Trefoil
  gens: a, b
  rels: a b a b^-1 a^-1 b^-1
  peripheral M
    gens: m
    rels:
    embed: m -> a
  end
end
",
    "group Modular
  gens: a, b
  rels: a^2, b^3
  peripheral A
    gens: x
    rels: x^2
    embed: x -> a
  end
  peripheral B
    gens: y
    rels: y^3
    embed: y -> b
  end
end
",
    "group F3
  gens: a, b, c
  rels:
  peripheral A
    gens: x
    rels:
    embed: x -> a
  end
  peripheral BC
    gens: x
    rels:
    embed: x -> b c
  end
end
",
];

pub fn seeds() -> Vec<MarkedGroup> {
    SEEDS.iter().map(|t| parse_group_file(t).unwrap()).collect()
}

fn random_word<R: Rng>(rng: &mut R, n: usize, len: usize) -> Word {
    let words = reduced_words_of_length(n, len);
    words.choose(rng).cloned().unwrap_or_default()
}

fn fresh(p: &Presentation) -> String {
    (0..)
        .map(|k| format!("g{k}"))
        .find(|s| p.generator_index(s).is_none())
        .unwrap()
}

/// One random valid move, or `None` when the drawn kind does not apply.
pub fn random_move<R: Rng>(rng: &mut R, p: &Presentation) -> Option<TietzeMove> {
    let n = p.num_generators();
    let rels = p.relators();
    match rng.gen_range(0..4) {
        0 if n > 0 => {
            let len = rng.gen_range(1..=3);
            Some(TietzeMove::AddGenerator {
                name: fresh(p),
                definition: random_word(rng, n, len),
            })
        }
        1 => {
            let removable: Vec<usize> = (0..n).filter(|&g| rels.iter().any(|r| r.occurrences(g) == 1)).collect();
            removable
                .choose(rng)
                .map(|&g| TietzeMove::RemoveGenerator { generator: g })
        }
        2 if !rels.is_empty() => {
            let i = rng.gen_range(0..rels.len());
            let j = rng.gen_range(0..rels.len());
            let clen = rng.gen_range(0..=1);
            let c = random_word(rng, n, clen);
            let inv = rng.gen_bool(0.5);
            let derivation = Derivation::new(vec![Factor::new(i, c, false), Factor::new(j, Word::empty(), inv)]);
            let relator = derivation.expand(rels).ok()?;
            if relator.is_empty() || relator.len() > 16 {
                return None;
            }
            Some(TietzeMove::AddRelator { relator, derivation })
        }
        3 if rels.len() > 1 => {
            let i = rng.gen_range(0..rels.len());
            let others: Vec<Word> = rels
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, r)| r.clone())
                .collect();
            let q = Presentation::new(p.generators().to_vec(), others).ok()?;
            let WpVerdict::Trivial(d) = decide_word(&q, &rels[i], &Budgets::default()).ok()? else {
                return None;
            };
            let factors = d
                .factors
                .into_iter()
                .map(|f| {
                    Factor::new(
                        if f.relator >= i { f.relator + 1 } else { f.relator },
                        f.conjugator,
                        f.inverse,
                    )
                })
                .collect();
            Some(TietzeMove::RemoveRelator {
                index: i,
                derivation: Derivation::new(factors),
            })
        }
        _ => None,
    }
}

/// Applies `count` recorded random moves, then shuffles generators and
/// peripheral order.
pub fn tietze_orbit<R: Rng>(rng: &mut R, g: &MarkedGroup, count: usize) -> (MarkedGroup, Vec<TietzeMove>) {
    let mut cur = g.clone();
    let mut log = Vec::new();
    let mut attempts = 0;
    while log.len() < count && attempts < 200 {
        attempts += 1;
        let Some(m) = random_move(rng, cur.ambient()) else {
            continue;
        };
        let Ok((next, _)) = apply_tietze_marked(&cur, &m) else {
            continue;
        };
        if next.ambient().size() > 48 {
            continue;
        }
        cur = next;
        log.push(m);
    }
    let n = cur.ambient().num_generators();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pperm: Vec<usize> = (0..cur.peripherals().len()).collect();
    pperm.shuffle(rng);
    (
        cur.permute_generators(&perm)
            .permute_peripherals(&pperm)
            .with_name("Orbit"),
        log,
    )
}
