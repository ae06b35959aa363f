use unicode_normalization::UnicodeNormalization;

/// NFC-normalize and split on whitespace. Lowercasing only changes cased
/// scripts; Indic text passes through unchanged.
pub fn words(text: &str, lowercase: bool) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    let normalized = if lowercase {
        normalized.to_lowercase()
    } else {
        normalized
    };
    normalized.split_whitespace().map(str::to_owned).collect()
}
