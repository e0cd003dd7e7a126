//! Minimal UTC timestamps.
//!
//! The crawler and the analyses only need to parse ISO-8601 timestamps as
//! emitted by the GitHub API, compare them, and take differences in hours,
//! so a thin wrapper over epoch seconds keeps the core dependency-free.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A point in time, stored as seconds since the Unix epoch (UTC).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid timestamp {input:?}: {reason}")]
pub struct TimestampError {
    pub input: String,
    pub reason: &'static str,
}

impl Timestamp {
    pub const fn from_epoch_seconds(secs: i64) -> Self {
        Timestamp(secs)
    }

    pub const fn epoch_seconds(self) -> i64 {
        self.0
    }

    /// Parses `YYYY-MM-DDTHH:MM:SS` with an optional fractional part
    /// (ignored) and a `Z` or `±HH:MM` offset. A missing offset means UTC.
    pub fn parse(input: &str) -> Result<Self, TimestampError> {
        let err = |reason| TimestampError {
            input: input.to_string(),
            reason,
        };
        let bytes = input.as_bytes();
        if bytes.len() < 19 {
            return Err(err("too short"));
        }
        let digits = |range: std::ops::Range<usize>| -> Result<i64, TimestampError> {
            input[range.clone()]
                .parse::<i64>()
                .map_err(|_| err("expected digits"))
        };
        if bytes[4] != b'-' || bytes[7] != b'-' || (bytes[10] != b'T' && bytes[10] != b' ') {
            return Err(err("malformed date"));
        }
        if bytes[13] != b':' || bytes[16] != b':' {
            return Err(err("malformed time"));
        }
        let year = digits(0..4)?;
        let month = digits(5..7)?;
        let day = digits(8..10)?;
        let hour = digits(11..13)?;
        let minute = digits(14..16)?;
        let second = digits(17..19)?;
        if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
            return Err(err("date out of range"));
        }
        if hour > 23 || minute > 59 || second > 60 {
            return Err(err("time out of range"));
        }

        let mut rest = &input[19..];
        if rest.starts_with('.') {
            let frac_len = rest[1..].bytes().take_while(|b| b.is_ascii_digit()).count();
            if frac_len == 0 {
                return Err(err("empty fraction"));
            }
            rest = &rest[1 + frac_len..];
        }
        let offset_secs = match rest {
            "" | "Z" | "z" => 0,
            _ => {
                let sign = match rest.as_bytes()[0] {
                    b'+' => 1,
                    b'-' => -1,
                    _ => return Err(err("bad offset")),
                };
                let body = &rest[1..];
                let (oh, om) = match body.len() {
                    5 if body.as_bytes()[2] == b':' => (&body[0..2], &body[3..5]),
                    4 => (&body[0..2], &body[2..4]),
                    2 => (&body[0..2], "0"),
                    _ => return Err(err("bad offset")),
                };
                let oh: i64 = oh.parse().map_err(|_| err("bad offset"))?;
                let om: i64 = om.parse().map_err(|_| err("bad offset"))?;
                sign * (oh * 3600 + om * 60)
            }
        };

        let days = days_from_civil(year, month, day);
        let secs = days * 86_400 + hour * 3600 + minute * 60 + second.min(59) - offset_secs;
        Ok(Timestamp(secs))
    }

    pub fn hours_until(self, later: Timestamp) -> f64 {
        (later.0 - self.0) as f64 / 3600.0
    }

    pub fn plus_hours(self, hours: i64) -> Timestamp {
        Timestamp(self.0 + hours * 3600)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let days = self.0.div_euclid(86_400);
        let rem = self.0.rem_euclid(86_400);
        let (year, month, day) = civil_from_days(days);
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            year,
            month,
            day,
            rem / 3600,
            (rem % 3600) / 60,
            rem % 60
        )
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Timestamp::parse(&raw).map_err(D::Error::custom)
    }
}

// Days between 1970-01-01 and the given civil date (Howard Hinnant's
// days_from_civil, valid far beyond any plausible comment timestamp).
fn days_from_civil(y: i64, m: i64, d: i64) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let mp = (m + 9) % 12;
    let doy = (153 * mp + 2) / 5 + d - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

fn civil_from_days(z: i64) -> (i64, i64, i64) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    (if m <= 2 { y + 1 } else { y }, m, d)
}
