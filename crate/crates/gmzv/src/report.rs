//! Deterministic run reports for the command-line interface.
//!
//! Every command prints a report consisting of `key: value` lines in
//! insertion order.  All floating-point values are rendered with a fixed
//! number of significant digits ([`fmt_sig`]), and input files are
//! identified by their SHA-256 digest, so that the same input file and
//! flags always produce a byte-identical report.  Wall-clock timing is
//! only appended on explicit request and is exempt from that guarantee.

use crate::defaults::REPORT_SIG_DIGITS;
use num::complex::Complex64;
use sha2::{Digest, Sha256};

/// Render a float with [`REPORT_SIG_DIGITS`] significant digits in
/// scientific notation.  The format is locale-independent and stable
/// across platforms (IEEE-754 double formatting is exactly specified).
#[must_use]
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.*e}", REPORT_SIG_DIGITS - 1)
}

/// Hex-encoded SHA-256 digest of a byte string.
#[must_use]
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// An insertion-ordered list of `key: value` report lines.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    lines: Vec<(String, String)>,
}

impl RunReport {
    /// Start a report for the given command name; `command` is always the
    /// first line.
    #[must_use]
    pub fn new(command: &str) -> Self {
        let mut r = RunReport { lines: Vec::new() };
        r.push("command", command);
        r
    }

    /// Append a raw string value.  Embedded newlines are not allowed in
    /// values (each entry is one line); they are replaced by spaces.
    pub fn push(&mut self, key: &str, value: impl AsRef<str>) {
        let v = value.as_ref().replace('\n', " ");
        self.lines.push((key.to_string(), v));
    }

    /// Append a float rendered at the fixed significant-digit count.
    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_sig(value));
    }

    /// Append a complex value as two lines, `<key>_re` and `<key>_im`.
    pub fn push_complex(&mut self, key: &str, value: Complex64) {
        self.push_f64(&format!("{key}_re"), value.re);
        self.push_f64(&format!("{key}_im"), value.im);
    }

    /// Append an unsigned integer.
    pub fn push_u64(&mut self, key: &str, value: u64) {
        self.push(key, value.to_string());
    }

    /// Number of lines so far.
    #[must_use]
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Render the report: one `key: value` line per entry, each terminated
    /// by a newline.
    #[must_use]
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_has_twelve_significant_digits() {
        assert_eq!(fmt_sig(2.404_113_806_319_188_6), "2.40411380632e0");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_PI_4), "7.85398163397e-1");
        assert_eq!(fmt_sig(-1.0), "-1.00000000000e0");
        assert_eq!(fmt_sig(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(12345.0), "1.23450000000e4");
    }

    #[test]
    fn sha256_matches_published_test_vector() {
        // FIPS 180-2 test vector for "abc".
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn render_preserves_insertion_order_and_is_stable() {
        let mut r = RunReport::new("eval");
        r.push("input", "graphs/chain3.json");
        r.push_u64("n_max", 2000);
        r.push_f64("value", 1.202_056_903_159_594);
        r.push_complex("z", Complex64::new(0.5, -0.25));
        let text = r.render();
        assert_eq!(
            text,
            "command: eval\n\
             input: graphs/chain3.json\n\
             n_max: 2000\n\
             value: 1.20205690316e0\n\
             z_re: 5.00000000000e-1\n\
             z_im: -2.50000000000e-1\n"
        );
        // Re-rendering is byte-identical.
        assert_eq!(r.render(), text);
        assert_eq!(r.len(), 6);
        assert!(!r.is_empty());
    }

    #[test]
    fn values_with_newlines_are_flattened() {
        let mut r = RunReport::new("reduce");
        r.push("note", "a\nb");
        assert_eq!(r.render(), "command: reduce\nnote: a b\n");
    }
}
