//! Orders of the blow-up centres.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Diagonals `δ(J)` of the point configuration.
    Centers,
    /// Sections `s(J)` over the exceptional divisors.
    Sections,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "set", rename_all = "snake_case")]
pub enum Center {
    Diagonal(Vec<usize>),
    Section(Vec<usize>),
}

impl Center {
    pub fn set(&self) -> &[usize] {
        match self {
            Center::Diagonal(j) | Center::Section(j) => j,
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.set().iter().map(|k| k.to_string()).collect();
        match self {
            Center::Diagonal(_) => write!(f, "δ{{{}}}", s.join(",")),
            Center::Section(_) => write!(f, "s{{{}}}", s.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupSchedule {
    pub kind: ScheduleKind,
    pub centers: Vec<Center>,
}

impl fmt::Display for BlowupSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.centers.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", s.join(", "))
    }
}

fn subsets(n: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|m| (0..n).filter(|k| m >> k & 1 == 1).map(|k| k + 1).collect::<Vec<_>>())
        .filter(|s| s.len() >= 2 && keep(s))
        .collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

/// Diagonals grouped by largest element, each group by decreasing size then
/// lexicographically; sections by decreasing size then lexicographically.
pub fn blowup_schedule(n: usize, kind: ScheduleKind) -> BlowupSchedule {
    let centers = match kind {
        ScheduleKind::Centers => {
            (2..=n).flat_map(|m| subsets(n, move |s| *s.last().unwrap() == m)).map(Center::Diagonal).collect()
        }
        ScheduleKind::Sections => subsets(n, |_| true).into_iter().map(Center::Section).collect(),
    };
    BlowupSchedule { kind, centers }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_prefixes() {
        assert_eq!(blowup_schedule(2, ScheduleKind::Centers).to_string(), "δ{1,2}");
        assert_eq!(blowup_schedule(3, ScheduleKind::Centers).to_string(), "δ{1,2}, δ{1,2,3}, δ{1,3}, δ{2,3}");
        let s = blowup_schedule(4, ScheduleKind::Sections).to_string();
        assert!(s.starts_with("s{1,2,3,4}, s{1,2,3}, "));
        assert!(s.ends_with("s{1,2}, s{1,3}, s{1,4}, s{2,3}, s{2,4}, s{3,4}"));
        let c = blowup_schedule(4, ScheduleKind::Centers).to_string();
        assert!(c.ends_with("δ{1,2,3,4}, δ{1,2,4}, δ{1,3,4}, δ{2,3,4}, δ{1,4}, δ{2,4}, δ{3,4}"));
    }

    #[test]
    fn lengths() {
        for n in 2..=8 {
            for kind in [ScheduleKind::Centers, ScheduleKind::Sections] {
                assert_eq!(blowup_schedule(n, kind).centers.len(), (1 << n) - n - 1);
            }
        }
    }
}
