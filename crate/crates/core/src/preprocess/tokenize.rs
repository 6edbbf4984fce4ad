/// Splits text into lowercase alphanumeric runs. Every other character is a
/// separator and is dropped; numerals are kept as tokens.
pub fn tokenize(raw_text: &str) -> Vec<String> {
    raw_text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent splitter: walks characters, classifying each as part of a
    /// word or a boundary.
    fn char_class_oracle(text: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for c in text.chars() {
            if c.is_ascii_lowercase() || c.is_ascii_digit() {
                cur.push(c);
            } else if c.is_ascii_uppercase() {
                cur.push(c.to_ascii_lowercase());
            } else if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    }

    #[test]
    fn plain_sentence() {
        assert_eq!(
            tokenize("Is bubble sort stable?"),
            ["is", "bubble", "sort", "stable"]
        );
    }

    #[test]
    fn empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn big_o_expression() {
        let expected = char_class_oracle("O(n^2) runtime");
        assert_eq!(expected, ["o", "n", "2", "runtime"]);
        assert_eq!(tokenize("O(n^2) runtime"), expected);
    }

    #[test]
    fn matches_oracle_on_ascii_samples() {
        for text in [
            "for i in range(10):\n    print(i)",
            "x % 7 == 3; y = x_1 + 2*z",
            "What's the BigO of mergeSort? O(n log n)!",
            "   \t  ",
        ] {
            assert_eq!(tokenize(text), char_class_oracle(text), "{text:?}");
        }
    }

    #[test]
    fn never_produces_reserved_prefix() {
        assert_eq!(tokenize("tag_for"), ["tag", "for"]);
    }
}
