//! Search budgets, execution mode and cooperative cancellation.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether data-parallel loops may fan out over the rayon pool. Without the
/// `parallel` feature both modes run serially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecMode {
    Serial,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Backtracking nodes per homomorphism search.
    pub hom_node_budget: u64,
    /// Largest permutation image group built by closure.
    pub closure_order_cap: u64,
    /// Word problem: extra length an intermediate word may reach over the
    /// word being decided.
    pub wp_conjugator_length: usize,
    /// Word problem: maximum number of relator conjugates in a derivation.
    pub wp_factor_count: usize,
    pub tietze_node_cap: u64,
    /// Largest total relator length kept on the Tietze frontier.
    pub tietze_size_cap: usize,
    pub max_level: usize,
    pub wall_clock_seconds: u64,
    #[serde(skip)]
    pub exec: ExecMode,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            hom_node_budget: 1_000_000,
            closure_order_cap: 1_000_000,
            wp_conjugator_length: 4,
            wp_factor_count: 4,
            tietze_node_cap: 100_000,
            tietze_size_cap: 64,
            max_level: 4,
            wall_clock_seconds: 60,
            exec: ExecMode::Parallel,
        }
    }
}

impl Budgets {
    /// Every budget zero: searches are not allowed to start.
    pub fn zero() -> Self {
        Budgets {
            hom_node_budget: 0,
            closure_order_cap: 0,
            wp_conjugator_length: 0,
            wp_factor_count: 0,
            tietze_node_cap: 0,
            tietze_size_cap: 0,
            max_level: 0,
            wall_clock_seconds: 0,
            exec: ExecMode::Serial,
        }
    }

    pub fn serial(mut self) -> Self {
        self.exec = ExecMode::Serial;
        self
    }

    /// Rejects zero values; the command line requires every budget positive.
    pub fn validate_positive(&self) -> Result<()> {
        let fields: [(&str, u64); 8] = [
            ("hom_node_budget", self.hom_node_budget),
            ("closure_order_cap", self.closure_order_cap),
            ("wp_conjugator_length", self.wp_conjugator_length as u64),
            ("wp_factor_count", self.wp_factor_count as u64),
            ("tietze_node_cap", self.tietze_node_cap),
            ("tietze_size_cap", self.tietze_size_cap as u64),
            ("max_level", self.max_level as u64),
            ("wall_clock_seconds", self.wall_clock_seconds),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parse = |v: &str| {
            v.trim()
                .replace('_', "")
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("`{key}` expects a nonnegative integer, got `{v}`")))
        };
        match key.trim() {
            "hom_node_budget" => self.hom_node_budget = parse(value)?,
            "closure_order_cap" => self.closure_order_cap = parse(value)?,
            "wp_conjugator_length" => self.wp_conjugator_length = parse(value)? as usize,
            "wp_factor_count" => self.wp_factor_count = parse(value)? as usize,
            "tietze_node_cap" => self.tietze_node_cap = parse(value)?,
            "tietze_size_cap" => self.tietze_size_cap = parse(value)? as usize,
            "max_level" => self.max_level = parse(value)? as usize,
            "wall_clock_seconds" => self.wall_clock_seconds = parse(value)?,
            other => return Err(Error::InvalidArgument(format!("unknown budget key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, 1, "expected `key = value`"))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}

/// Shared stop signal: an explicit cancel flag plus an optional deadline.
#[derive(Clone, Debug, Default)]
pub struct Control {
    cancel: Arc<AtomicBool>,
    deadline: Option<Instant>,
}

impl Control {
    pub fn new() -> Self {
        Control::default()
    }

    pub fn with_timeout(seconds: u64) -> Self {
        Control {
            cancel: Arc::new(AtomicBool::new(false)),
            deadline: Some(Instant::now() + Duration::from_secs(seconds)),
        }
    }

    /// A child that stops when either it or its parent is cancelled.
    pub fn child(&self) -> ChildControl {
        ChildControl {
            parent: self.clone(),
            own: Arc::new(AtomicBool::new(false)),
        }
    }

    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn stopped(&self) -> bool {
        self.cancel.load(Ordering::Relaxed) || self.timed_out()
    }
}

#[derive(Clone, Debug)]
pub struct ChildControl {
    parent: Control,
    own: Arc<AtomicBool>,
}

impl ChildControl {
    pub fn cancel(&self) {
        self.own.store(true, Ordering::Relaxed);
    }

    pub fn stopped(&self) -> bool {
        self.own.load(Ordering::Relaxed) || self.parent.stopped()
    }
}

/// Anything that can tell a long-running loop to give up.
pub trait Stop: Sync {
    fn stopped(&self) -> bool;
}

impl Stop for Control {
    fn stopped(&self) -> bool {
        Control::stopped(self)
    }
}

impl Stop for ChildControl {
    fn stopped(&self) -> bool {
        ChildControl::stopped(self)
    }
}

/// Never stops.
pub struct Unbounded;

impl Stop for Unbounded {
    fn stopped(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documentation() {
        let b = Budgets::default();
        assert_eq!(
            (
                b.hom_node_budget,
                b.closure_order_cap,
                b.wp_conjugator_length,
                b.wp_factor_count,
                b.tietze_node_cap,
                b.tietze_size_cap,
                b.max_level,
                b.wall_clock_seconds
            ),
            (1_000_000, 1_000_000, 4, 4, 100_000, 64, 4, 60)
        );
        assert!(b.validate_positive().is_ok());
        assert!(Budgets::zero().validate_positive().is_err());
    }

    #[test]
    fn config_lines() {
        let mut b = Budgets::default();
        b.apply_config("# budgets\nmax_level = 6\n\nhom_node_budget=1_000\n")
            .unwrap();
        assert_eq!(b.max_level, 6);
        assert_eq!(b.hom_node_budget, 1000);
        assert!(b.apply_config("bogus = 1").is_err());
        assert!(b.apply_config("max_level 3").is_err());
    }

    #[test]
    fn child_sees_parent_cancel() {
        let c = Control::new();
        let child = c.child();
        assert!(!child.stopped());
        c.cancel();
        assert!(child.stopped());
    }
}
