//! Keystream and state files.
//!
//! Keystream files hold one ASCII `0`/`1` per bit in newline-terminated
//! lines of 64 bits (the last line may be shorter); an empty keystream is
//! an empty file.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::WordState;
use crate::error::{Error, Result};

const LINE_BITS: usize = 64;

pub fn format_keystream(bits: &[bool]) -> String {
    let mut out = String::with_capacity(bits.len() + bits.len() / LINE_BITS + 1);
    for chunk in bits.chunks(LINE_BITS) {
        out.extend(chunk.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn parse_keystream(text: &str) -> Result<Vec<bool>> {
    let mut bits = Vec::with_capacity(text.len());
    for (ln, line) in text.lines().enumerate() {
        for (col, ch) in line.trim_end_matches('\r').chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line: ln + 1,
                        col: col + 1,
                        msg: format!("unexpected character `{c}` in keystream"),
                    })
                }
            }
        }
    }
    Ok(bits)
}

/// A recorded initial state together with a digest binding it to the
/// keystream it produced, for later verification of an attack run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SealedState {
    pub cipher: String,
    pub seed: u64,
    /// Clock-0 state (post-initialization for WG-PRNG), hex words oldest first.
    pub state_hex: String,
    pub keystream_len: usize,
    /// SHA-256 over `cipher`, `state_hex` and the keystream text.
    pub digest: String,
}

impl SealedState {
    pub fn seal(cipher: &str, seed: u64, state: &WordState, keystream: &[bool]) -> Self {
        let state_hex = state.to_hex();
        let digest = digest(cipher, &state_hex, keystream);
        SealedState {
            cipher: cipher.to_string(),
            seed,
            state_hex,
            keystream_len: keystream.len(),
            digest,
        }
    }

    pub fn state(&self) -> Result<WordState> {
        WordState::from_hex(&self.state_hex)
    }

    /// Checks the digest against a keystream.
    pub fn verify(&self, keystream: &[bool]) -> bool {
        self.keystream_len == keystream.len() && digest(&self.cipher, &self.state_hex, keystream) == self.digest
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })
    }
}

fn digest(cipher: &str, state_hex: &str, keystream: &[bool]) -> String {
    let mut h = Sha256::new();
    h.update(cipher.as_bytes());
    h.update([0]);
    h.update(state_hex.as_bytes());
    h.update([0]);
    h.update(format_keystream(keystream).as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::Gf128;
    use proptest::prelude::*;

    #[test]
    fn line_layout() {
        assert_eq!(format_keystream(&[]), "");
        let bits: Vec<bool> = (0..130).map(|i| i % 3 == 0).collect();
        let text = format_keystream(&bits);
        let lines: Vec<&str> = text.split_terminator('\n').collect();
        assert_eq!(lines.iter().map(|l| l.len()).collect::<Vec<_>>(), [64, 64, 2]);
        assert!(text.ends_with('\n'));
        assert!(parse_keystream("01x\n").is_err());
    }

    #[test]
    fn sealed_state_detects_tampering() {
        let s = WordState::new(vec![Gf128::new(5).unwrap(), Gf128::new(0x40).unwrap()]);
        let ks = vec![true, false, true];
        let sealed = SealedState::seal("toy", 1, &s, &ks);
        let back = SealedState::from_json(&sealed.to_json()).unwrap();
        assert_eq!(back, sealed);
        assert!(back.verify(&ks));
        assert!(!back.verify(&[true, true, true]));
        assert_eq!(back.state().unwrap(), s);
    }

    proptest! {
        #[test]
        fn keystream_text_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..300)) {
            prop_assert_eq!(parse_keystream(&format_keystream(&bits)).unwrap(), bits);
        }
    }
}
