//! Maps an offset inside a JSON string value back to a line and column of
//! the manifest text, so that polynomial parse errors point at the source.

/// Every string literal of a JSON document with the 1-based line and column
/// of its first content character.
#[derive(Clone, Debug, Default)]
pub struct Locator {
    strings: Vec<(String, usize, usize)>,
}

impl Locator {
    pub fn new(text: &str) -> Self {
        let mut strings = Vec::new();
        let (mut line, mut col) = (1usize, 1usize);
        let mut chars = text.char_indices().peekable();
        while let Some((start, c)) = chars.next() {
            if c == '"' {
                let (l0, c0) = (line, col + 1);
                col += 1;
                let mut escaped = false;
                let mut end = text.len();
                for (i, d) in chars.by_ref() {
                    if d == '\n' {
                        line += 1;
                        col = 1;
                    } else {
                        col += 1;
                    }
                    if escaped {
                        escaped = false;
                    } else if d == '\\' {
                        escaped = true;
                    } else if d == '"' {
                        end = i;
                        break;
                    }
                }
                let raw = &text[start..(end + 1).min(text.len())];
                if let Ok(s) = serde_json::from_str::<String>(raw) {
                    strings.push((s, l0, c0));
                }
            } else if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Self { strings }
    }

    /// Position of character offset `offset` inside the first literal equal to `value`.
    pub fn locate(&self, value: &str, byte_offset: usize) -> Option<(usize, usize)> {
        let (s, line, col) = self.strings.iter().find(|(s, _, _)| s == value)?;
        let chars = s.get(..byte_offset.min(s.len())).map_or(0, |p| p.chars().count());
        Some((*line, col + chars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_offsets() {
        let text = "{\n  \"a\": [\"z1 + \",\n    \"w9*q\"]\n}";
        let loc = Locator::new(text);
        assert_eq!(loc.locate("z1 + ", 0), Some((2, 10)));
        assert_eq!(loc.locate("w9*q", 3), Some((3, 9)));
        assert_eq!(loc.locate("missing", 0), None);
    }
}
