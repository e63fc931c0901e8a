//! Edge presence schedules over integer ticks.
//!
//! A schedule is a finite list of half-open intervals optionally followed by
//! a periodic tail that repeats forever. Internally it is kept in a canonical
//! form: maximal non-touching runs, then a tail that starts strictly after
//! the last run and is pulled back as far as the runs allow. Two schedules
//! describing the same presence function compare equal.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One abstract time unit. Runs never approach the 64-bit range.
pub type Tick = u64;

/// Half-open tick interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub start: Tick,
    pub end: Tick,
}

impl Interval {
    pub fn new(start: Tick, end: Tick) -> Self {
        Interval { start, end }
    }

    pub fn len(&self) -> Tick {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, t: Tick) -> bool {
        self.start <= t && t < self.end
    }
}

/// Presence during `[offset + i*period, offset + i*period + duration)` for
/// every `i >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicTail {
    pub offset: Tick,
    pub period: Tick,
    pub duration: Tick,
}

impl PeriodicTail {
    fn occurrence(&self, i: Tick) -> Interval {
        let start = self.offset + i * self.period;
        Interval::new(start, start + self.duration)
    }
}

/// A maximal stretch of continuous presence; `end == None` means forever.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: Tick,
    pub end: Option<Tick>,
}

impl Run {
    pub fn contains(&self, t: Tick) -> bool {
        self.start <= t && self.end.is_none_or(|e| t < e)
    }

    /// Whether `[t, t + latency]` fits inside this run (departure `t`).
    pub fn carries(&self, t: Tick, latency: Tick) -> bool {
        self.start <= t && self.end.is_none_or(|e| t + latency <= e)
    }
}

/// Tick window masked out by [`PresenceSchedule::subtract`]; `end == None`
/// is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub start: Tick,
    pub end: Option<Tick>,
}

impl Window {
    pub fn new(start: Tick, end: Tick) -> Self {
        Window {
            start,
            end: Some(end),
        }
    }

    pub fn from(start: Tick) -> Self {
        Window { start, end: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Tail {
    None,
    Forever { from: Tick },
    /// `duration < period`, offset strictly after the last run.
    Periodic(PeriodicTail),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PresenceSchedule {
    runs: Vec<Interval>,
    tail: Tail,
}

impl PresenceSchedule {
    /// Validates and canonicalizes a schedule as written in scenario files.
    ///
    /// Intervals must be nonempty, sorted and pairwise disjoint (touching is
    /// allowed and merged); the periodic tail must start at or after the end
    /// of the last interval and satisfy `0 < duration <= period`.
    pub fn new(intervals: Vec<Interval>, periodic: Option<PeriodicTail>) -> Result<Self, String> {
        for (i, iv) in intervals.iter().enumerate() {
            if iv.is_empty() {
                return Err(format!("interval [{},{}) is empty", iv.start, iv.end));
            }
            if i > 0 && intervals[i - 1].end > iv.start {
                return Err(format!(
                    "interval [{},{}) overlaps or precedes [{},{})",
                    iv.start,
                    iv.end,
                    intervals[i - 1].start,
                    intervals[i - 1].end
                ));
            }
        }
        let tail = match periodic {
            None => Tail::None,
            Some(p) => {
                if p.period == 0 {
                    return Err("periodic tail needs period > 0".into());
                }
                if p.duration == 0 || p.duration > p.period {
                    return Err(format!(
                        "periodic tail needs 0 < duration <= period (got duration {} period {})",
                        p.duration, p.period
                    ));
                }
                if let Some(last) = intervals.last() {
                    if p.offset < last.end {
                        return Err(format!(
                            "periodic offset {} precedes the end {} of the last interval",
                            p.offset, last.end
                        ));
                    }
                }
                if p.duration == p.period {
                    Tail::Forever { from: p.offset }
                } else {
                    Tail::Periodic(p)
                }
            }
        };
        let schedule = canonical(intervals, tail);
        if schedule.is_empty() {
            return Err("schedule never presents the edge".into());
        }
        Ok(schedule)
    }

    /// Present at every tick.
    pub fn always() -> Self {
        Self::from_tick(0)
    }

    /// Present from `t` on, forever.
    pub fn from_tick(t: Tick) -> Self {
        PresenceSchedule {
            runs: Vec::new(),
            tail: Tail::Forever { from: t },
        }
    }

    pub fn finite(intervals: Vec<Interval>) -> Result<Self, String> {
        Self::new(intervals, None)
    }

    /// Canonical finite runs (the part before the tail).
    pub fn intervals(&self) -> &[Interval] {
        &self.runs
    }

    /// Canonical tail in file form; an always-present tail is written as
    /// `period == duration == 1`.
    pub fn periodic(&self) -> Option<PeriodicTail> {
        match self.tail {
            Tail::None => None,
            Tail::Forever { from } => Some(PeriodicTail {
                offset: from,
                period: 1,
                duration: 1,
            }),
            Tail::Periodic(p) => Some(p),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty() && self.tail == Tail::None
    }

    /// Infinitely often present.
    pub fn is_recurrent(&self) -> bool {
        self.tail != Tail::None
    }

    /// First tick of presence.
    pub fn first_presence(&self) -> Option<Tick> {
        self.run_at_or_after(0).map(|r| r.start)
    }

    /// For a non-recurrent schedule, the tick from which the edge is absent
    /// forever.
    pub fn final_absence(&self) -> Option<Tick> {
        match self.tail {
            Tail::None => Some(self.runs.last().map_or(0, |r| r.end)),
            _ => None,
        }
    }

    pub fn is_present(&self, t: Tick) -> bool {
        self.run_at_or_after(t).is_some_and(|r| r.start <= t)
    }

    /// The maximal run containing `t`, or else the first run starting after
    /// `t`.
    pub fn run_at_or_after(&self, t: Tick) -> Option<Run> {
        let idx = self.runs.partition_point(|r| r.end <= t);
        if let Some(r) = self.runs.get(idx) {
            return Some(Run {
                start: r.start,
                end: Some(r.end),
            });
        }
        match self.tail {
            Tail::None => None,
            Tail::Forever { from } => Some(Run {
                start: from,
                end: None,
            }),
            Tail::Periodic(p) => {
                let i = if t < p.offset {
                    0
                } else {
                    let i = (t - p.offset) / p.period;
                    if p.occurrence(i).contains(t) {
                        i
                    } else {
                        i + 1
                    }
                };
                let occ = p.occurrence(i);
                Some(Run {
                    start: occ.start,
                    end: Some(occ.end),
                })
            }
        }
    }

    /// Runs intersecting `[t, ∞)` in order; infinite for recurrent schedules.
    pub fn runs_from(&self, t: Tick) -> impl Iterator<Item = Run> + '_ {
        let mut cursor = Some(t);
        std::iter::from_fn(move || {
            let run = self.run_at_or_after(cursor?)?;
            cursor = run.end;
            Some(run)
        })
    }

    /// Earliest departure `d >= ready` usable by a hop of `latency`.
    ///
    /// With `whole_window`, the edge must stay present over `[d, d + latency]`
    /// (a run `[s, e)` carries the hop iff `s <= d` and `d + latency <= e`);
    /// otherwise presence at `d` suffices.
    pub fn earliest_departure(&self, ready: Tick, latency: Tick, whole_window: bool) -> Option<Tick> {
        if !whole_window {
            return self.run_at_or_after(ready).map(|r| r.start.max(ready));
        }
        let idx = self.runs.partition_point(|r| r.end <= ready);
        for r in &self.runs[idx..] {
            let d = r.start.max(ready);
            if d + latency <= r.end {
                return Some(d);
            }
        }
        match self.tail {
            Tail::None => None,
            Tail::Forever { from } => Some(from.max(ready)),
            Tail::Periodic(p) => {
                if p.duration < latency {
                    return None;
                }
                // smallest occurrence with start + duration >= ready + latency
                let need = (ready + latency)
                    .saturating_sub(p.duration)
                    .saturating_sub(p.offset);
                let i = need.div_ceil(p.period);
                Some(p.occurrence(i).start.max(ready))
            }
        }
    }

    /// Forces absence over `window`.
    pub fn subtract(&self, window: Window) -> PresenceSchedule {
        let mut runs = self.runs.clone();
        let mut tail = self.tail;
        match (self.tail, window.end) {
            (Tail::None, _) => {}
            (Tail::Forever { from }, None) => {
                if from < window.start {
                    runs.push(Interval::new(from, window.start));
                }
                tail = Tail::None;
            }
            (Tail::Forever { from }, Some(end)) => {
                if from < window.start {
                    runs.push(Interval::new(from, window.start));
                }
                if from < end {
                    tail = Tail::Forever { from: end };
                }
            }
            (Tail::Periodic(p), None) => {
                let mut i = 0;
                loop {
                    let occ = p.occurrence(i);
                    if occ.start >= window.start {
                        break;
                    }
                    runs.push(occ);
                    i += 1;
                }
                tail = Tail::None;
            }
            (Tail::Periodic(p), Some(end)) => {
                let first_hit = self.run_at_or_after(window.start).map(|r| r.start);
                if first_hit.is_some_and(|s| s < end) && end > p.offset {
                    let j = (end - p.offset).div_ceil(p.period);
                    runs.extend((0..j).map(|i| p.occurrence(i)));
                    tail = Tail::Periodic(PeriodicTail {
                        offset: p.offset + j * p.period,
                        ..p
                    });
                }
            }
        }
        let mut cut = Vec::with_capacity(runs.len() + 1);
        for r in runs {
            let left = Interval::new(r.start, r.end.min(window.start));
            if !left.is_empty() {
                cut.push(left);
            }
            if let Some(end) = window.end {
                let right = Interval::new(r.start.max(end), r.end);
                if !right.is_empty() {
                    cut.push(right);
                }
            }
        }
        canonical(cut, tail)
    }
}

fn canonical(mut runs: Vec<Interval>, mut tail: Tail) -> PresenceSchedule {
    runs.retain(|r| !r.is_empty());
    runs.sort();
    let mut merged: Vec<Interval> = Vec::with_capacity(runs.len());
    for r in runs {
        match merged.last_mut() {
            Some(last) if r.start <= last.end => last.end = last.end.max(r.end),
            _ => merged.push(r),
        }
    }
    match &mut tail {
        Tail::None => {}
        Tail::Forever { from } => {
            while let Some(last) = merged.last() {
                if last.end < *from {
                    break;
                }
                *from = (*from).min(last.start);
                merged.pop();
            }
        }
        Tail::Periodic(p) => {
            if let Some(last) = merged.last_mut() {
                if last.end == p.offset {
                    last.end = p.offset + p.duration;
                    p.offset += p.period;
                }
            }
            // pull back occurrences that were spelled out as runs
            while p.offset >= p.period {
                let prev = p.occurrence(0).start - p.period;
                match merged.last() {
                    Some(last) if *last == Interval::new(prev, prev + p.duration) => {
                        merged.pop();
                        p.offset = prev;
                    }
                    _ => break,
                }
            }
        }
    }
    PresenceSchedule { runs: merged, tail }
}

impl fmt::Debug for PresenceSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.runs {
            write!(f, "[{},{})", r.start, r.end)?;
        }
        match self.tail {
            Tail::None => Ok(()),
            Tail::Forever { from } => write!(f, "[{from},inf)"),
            Tail::Periodic(p) => write!(f, "[{}+{}k,+{})", p.offset, p.period, p.duration),
        }
    }
}
