//! The marked-group text format.
//!
//! ```text
//! group F2
//!   gens: a, b
//!   rels: a^2 b^3, a b a^-1 b^-1
//!   peripheral P
//!     gens: x, y
//!     rels: x y x^-1 y^-1
//!     embed: x -> a a, y -> b
//!   end
//! end
//! ```
//!
//! Words are whitespace-separated tokens `g`, `g^k` (`k` a nonzero integer),
//! or `1` for the identity. `#` starts a comment. `embed:` takes either
//! `name -> word` items or bare words in generator order; when omitted, each
//! peripheral generator must also name an ambient generator.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::{MarkedGroup, PeripheralRecord, Presentation};
use crate::word::{Letter, Word};

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses a word written in the text syntax against `names`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    parse_word_at(text, names, 1, 1)
}

fn parse_word_at(text: &str, names: &[String], line: usize, col0: usize) -> Result<Word> {
    let mut letters = Vec::new();
    for (offset, token) in tokens(text) {
        let column = col0 + offset;
        if token == "1" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::parse(line, column, format!("bad exponent in `{token}`")))?;
                if e == 0 {
                    return Err(Error::parse(line, column, format!("zero exponent in `{token}`")));
                }
                (n, e)
            }
            None => (token, 1),
        };
        if !is_identifier(name) {
            return Err(Error::parse(line, column, format!("bad generator token `{token}`")));
        }
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UndeclaredGenerator { name: name.to_string() })?;
        let l = Letter::new(g, exp < 0);
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(Word::from_letters(letters))
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
}

/// Comma-separated items with their byte offsets; empty input yields none.
fn items(text: &str) -> Vec<(usize, &str)> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == ',' {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

struct Line<'a> {
    number: usize,
    indent: usize,
    body: &'a str,
}

#[derive(Default)]
struct PeripheralDraft {
    name: String,
    line: usize,
    gens: Option<Vec<String>>,
    rels: Vec<Word>,
    embed: Option<(usize, usize, String)>,
}

/// Parses a marked-group file.
pub fn parse_group_file(text: &str) -> Result<MarkedGroup> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let without_comment = raw.split('#').next().unwrap_or("");
            let trimmed = without_comment.trim_end();
            let body = trimmed.trim_start();
            if body.is_empty() {
                None
            } else {
                Some(Line {
                    number: i + 1,
                    indent: trimmed.len() - body.len(),
                    body,
                })
            }
        })
        .collect();

    let mut it = lines.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input; expected `group <Name>`"))?;
    let name = match first.body.split_once(char::is_whitespace) {
        Some(("group", rest)) if is_identifier(rest.trim()) => rest.trim().to_string(),
        _ => return Err(Error::parse(first.number, first.indent + 1, "expected `group <Name>`")),
    };

    let mut gens: Option<Vec<String>> = None;
    let mut rel_texts: Vec<(usize, usize, String)> = Vec::new();
    let mut seen_rels = false;
    let mut peripherals: Vec<PeripheralDraft> = Vec::new();
    let mut current: Option<PeripheralDraft> = None;
    let mut closed = false;

    for line in it {
        if closed {
            return Err(Error::parse(line.number, line.indent + 1, "content after final `end`"));
        }
        let col = line.indent + 1;
        if line.body == "end" {
            match current.take() {
                Some(p) => peripherals.push(p),
                None => closed = true,
            }
            continue;
        }
        if let Some(rest) = line.body.strip_prefix("peripheral") {
            if !rest.starts_with(char::is_whitespace) || !is_identifier(rest.trim()) {
                return Err(Error::parse(line.number, col, "expected `peripheral <Name>`"));
            }
            if current.is_some() {
                return Err(Error::parse(line.number, col, "nested peripheral block"));
            }
            if gens.is_none() {
                return Err(Error::parse(line.number, col, "peripheral before ambient `gens:`"));
            }
            current = Some(PeripheralDraft {
                name: rest.trim().to_string(),
                line: line.number,
                ..Default::default()
            });
            continue;
        }
        let (key, value) = line
            .body
            .split_once(':')
            .ok_or_else(|| Error::parse(line.number, col, format!("unrecognised line `{}`", line.body)))?;
        let key = key.trim();
        let value_col = col + line.body.find(':').unwrap() + 1;
        match (key, current.as_mut()) {
            ("gens", None) => {
                if gens.is_some() {
                    return Err(Error::parse(line.number, col, "duplicate `gens:`"));
                }
                gens = Some(parse_names(value, line.number, value_col)?);
            }
            ("rels", None) => {
                if gens.is_none() {
                    return Err(Error::parse(line.number, col, "`rels:` before `gens:`"));
                }
                if seen_rels {
                    return Err(Error::parse(line.number, col, "duplicate `rels:`"));
                }
                seen_rels = true;
                for (off, item) in items(value) {
                    rel_texts.push((line.number, value_col + off, item.to_string()));
                }
            }
            ("gens", Some(p)) => {
                if p.gens.is_some() {
                    return Err(Error::parse(line.number, col, "duplicate `gens:`"));
                }
                p.gens = Some(parse_names(value, line.number, value_col)?);
            }
            ("rels", Some(p)) => {
                let names = p
                    .gens
                    .as_ref()
                    .ok_or_else(|| Error::parse(line.number, col, "`rels:` before `gens:`"))?;
                for (off, item) in items(value) {
                    if item.trim().is_empty() {
                        return Err(Error::parse(line.number, value_col + off, "empty relator"));
                    }
                    p.rels.push(parse_word_at(item, names, line.number, value_col + off)?);
                }
            }
            ("embed", Some(p)) => {
                if p.embed.is_some() {
                    return Err(Error::parse(line.number, col, "duplicate `embed:`"));
                }
                p.embed = Some((line.number, value_col, value.to_string()));
            }
            (other, _) => {
                return Err(Error::parse(line.number, col, format!("unknown key `{other}`")));
            }
        }
    }
    if current.is_some() {
        return Err(Error::parse(
            lines.last().map_or(1, |l| l.number),
            1,
            "unterminated peripheral block",
        ));
    }
    if !closed {
        return Err(Error::parse(
            lines.last().map_or(1, |l| l.number),
            1,
            "missing final `end`",
        ));
    }
    let gens = gens.ok_or_else(|| Error::parse(first.number, 1, "missing `gens:`"))?;
    let mut relators = Vec::with_capacity(rel_texts.len());
    for (ln, c, text) in &rel_texts {
        if text.trim().is_empty() {
            return Err(Error::parse(*ln, *c, "empty relator"));
        }
        relators.push(parse_word_at(text, &gens, *ln, *c)?);
    }
    let ambient = Presentation::new(gens.clone(), relators)?;

    let mut records = Vec::with_capacity(peripherals.len());
    for p in peripherals {
        let own_gens = p
            .gens
            .ok_or_else(|| Error::parse(p.line, 1, format!("peripheral `{}` has no `gens:`", p.name)))?;
        let ambient_words = match &p.embed {
            Some((ln, c, text)) => parse_embed(text, &own_gens, &gens, *ln, *c, &p.name)?,
            None => {
                let mut words = Vec::new();
                for g in &own_gens {
                    match gens.iter().position(|a| a == g) {
                        Some(i) => words.push(Word::letter(Letter::gen(i))),
                        None => {
                            return Err(Error::ArityMismatch {
                                peripheral: p.name.clone(),
                                words: 0,
                                generators: own_gens.len(),
                            })
                        }
                    }
                }
                words
            }
        };
        let own = Presentation::new(own_gens, p.rels)?;
        records.push(PeripheralRecord::new(p.name, ambient_words, own)?);
    }
    MarkedGroup::new(name, ambient, records)
}

fn parse_names(value: &str, line: usize, col: usize) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (off, item) in items(value) {
        let name = item.trim();
        if !is_identifier(name) {
            return Err(Error::parse(line, col + off, format!("bad generator name `{name}`")));
        }
        if out.iter().any(|n| n == name) {
            return Err(Error::DuplicateGenerator { name: name.to_string() });
        }
        out.push(name.to_string());
    }
    Ok(out)
}

fn parse_embed(
    text: &str,
    own: &[String],
    ambient: &[String],
    line: usize,
    col: usize,
    peripheral: &str,
) -> Result<Vec<Word>> {
    let parts = items(text);
    let named = parts.iter().any(|(_, s)| s.contains("->"));
    if !named {
        let words = parts
            .iter()
            .map(|(off, s)| parse_word_at(s, ambient, line, col + off))
            .collect::<Result<Vec<_>>>()?;
        if words.len() != own.len() {
            return Err(Error::ArityMismatch {
                peripheral: peripheral.to_string(),
                words: words.len(),
                generators: own.len(),
            });
        }
        return Ok(words);
    }
    let mut slots: Vec<Option<Word>> = vec![None; own.len()];
    let mut count = 0;
    for (off, s) in &parts {
        let (lhs, _) = s
            .split_once("->")
            .ok_or_else(|| Error::parse(line, col + off, "mixed positional and named embed items"))?;
        let g = lhs.trim();
        let idx = own
            .iter()
            .position(|n| n == g)
            .ok_or_else(|| Error::UndeclaredGenerator { name: g.to_string() })?;
        if slots[idx].is_some() {
            return Err(Error::parse(line, col + off, format!("`{g}` embedded twice")));
        }
        let rhs_off = s.find("->").unwrap() + 2;
        slots[idx] = Some(parse_word_at(&s[rhs_off..], ambient, line, col + off + rhs_off)?);
        count += 1;
    }
    if count != own.len() {
        return Err(Error::ArityMismatch {
            peripheral: peripheral.to_string(),
            words: count,
            generators: own.len(),
        });
    }
    Ok(slots.into_iter().map(|w| w.expect("all slots filled")).collect())
}

fn write_words(out: &mut String, words: &[Word], names: &[String]) {
    let rendered: Vec<String> = words.iter().map(|w| w.display(names).to_string()).collect();
    out.push_str(&rendered.join(", "));
}

fn write_line(out: &mut String, indent: &str, key: &str, value: &str) {
    if value.is_empty() {
        let _ = writeln!(out, "{indent}{key}:");
    } else {
        let _ = writeln!(out, "{indent}{key}: {value}");
    }
}

/// Canonical text rendering; `parse_group_file` inverts it exactly.
pub fn serialize_group(g: &MarkedGroup) -> String {
    let mut out = String::new();
    let names = g.ambient().generators();
    let _ = writeln!(out, "group {}", g.name());
    write_line(&mut out, "  ", "gens", &names.join(", "));
    let mut rels = String::new();
    write_words(&mut rels, g.ambient().relators(), names);
    write_line(&mut out, "  ", "rels", &rels);
    for p in g.peripherals() {
        let own = p.own_presentation();
        let _ = writeln!(out, "  peripheral {}", p.name());
        write_line(&mut out, "    ", "gens", &own.generators().join(", "));
        let mut prels = String::new();
        write_words(&mut prels, own.relators(), own.generators());
        write_line(&mut out, "    ", "rels", &prels);
        let embed: Vec<String> = own
            .generators()
            .iter()
            .zip(p.ambient_words())
            .map(|(x, w)| format!("{x} -> {}", w.display(names)))
            .collect();
        write_line(&mut out, "    ", "embed", &embed.join(", "));
        out.push_str("  end\n");
    }
    out.push_str("end\n");
    out
}
