use super::{wgt_anf, CipherSpec, WORD_BITS};
use crate::anf::BoolPoly;
use crate::error::{Error, Result};

/// Parses a cipher description of `key = value` lines (`#` starts a comment).
///
/// Keys: `a`, `feedback_taps` (comma separated), `omega_tap`, `filter_word`,
/// `filter` (ANF text or `WGT13`), `max_keystream` (integer or `unlimited`),
/// and optionally `name` and `init_rounds`.
pub fn parse_spec(text: &str) -> Result<CipherSpec> {
    let mut a = None;
    let mut taps = None;
    let mut omega_tap = None;
    let mut filter_word = None;
    let mut filter = None;
    let mut max_keystream = None;
    let mut name = String::from("custom");
    let mut init_rounds = 0usize;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(Error::Parse {
                line: line_no,
                col: 1,
                msg: "expected `key = value`".into(),
            });
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        let vcol = eq + 2 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        let err = |msg: String| Error::Parse {
            line: line_no,
            col: vcol,
            msg,
        };
        let int = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| err(format!("`{v}` is not a non-negative integer")))
        };
        match key {
            "a" => a = Some(int(value)?),
            "feedback_taps" => {
                let list = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(int)
                    .collect::<Result<Vec<_>>>()?;
                taps = Some(list);
            }
            "omega_tap" => omega_tap = Some(int(value)?),
            "filter_word" => filter_word = Some(int(value)?),
            "filter" => {
                let f = if value == "WGT13" {
                    wgt_anf()
                } else {
                    BoolPoly::parse(value, WORD_BITS).map_err(|e| match e {
                        Error::Parse { col, msg, .. } => Error::Parse {
                            line: line_no,
                            col: vcol + col - 1,
                            msg,
                        },
                        other => other,
                    })?
                };
                filter = Some(f);
            }
            "max_keystream" => {
                max_keystream = Some(match value {
                    "unlimited" | "none" => None,
                    v => Some(v.parse::<u64>().map_err(|_| err(format!("bad limit `{v}`")))?),
                })
            }
            "name" => name = value.to_string(),
            "init_rounds" => init_rounds = int(value)?,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let missing = |k: &str| Error::Parse {
        line: text.lines().count().max(1),
        col: 1,
        msg: format!("missing key `{k}`"),
    };
    let a = a.ok_or_else(|| missing("a"))?;
    let mut spec = CipherSpec::new(
        name,
        a,
        taps.ok_or_else(|| missing("feedback_taps"))?,
        omega_tap.ok_or_else(|| missing("omega_tap"))?,
        filter_word.ok_or_else(|| missing("filter_word"))?,
        filter.ok_or_else(|| missing("filter"))?,
        max_keystream.unwrap_or(None),
    )?;
    spec.init_rounds = init_rounds;
    Ok(spec)
}
