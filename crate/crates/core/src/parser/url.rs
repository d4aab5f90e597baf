//! URL string handling: splitting paths from query strings, percent
//! decoding, and matching concrete paths against endpoint templates.

use crate::model::{HttpCall, QueryParam};

use super::ParseError;

/// Splits the literal request URL into its path and decoded query pairs.
///
/// The path is everything before the first `?`, kept verbatim. Query pairs
/// split on `&`, then on the first `=`; a pair without `=` keeps the whole
/// piece as the name with an empty value. Empty pieces (`a=1&&b=2`) are
/// dropped. Percent escapes in names and values are decoded.
pub fn parse_url(raw: &str) -> Result<(String, Vec<QueryParam>), ParseError> {
    let (path, query_str) = match raw.find('?') {
        Some(i) => (&raw[..i], Some(&raw[i + 1..])),
        None => (raw, None),
    };
    if path.is_empty() || !path.starts_with('/') {
        return Err(ParseError::MalformedUrl {
            url: raw.to_string(),
            reason: "path portion must be nonempty and begin with '/'".to_string(),
        });
    }
    let mut query = Vec::new();
    if let Some(query_str) = query_str {
        for piece in query_str.split('&') {
            if piece.is_empty() {
                continue;
            }
            let (name, value) = match piece.find('=') {
                Some(i) => (&piece[..i], &piece[i + 1..]),
                None => (piece, ""),
            };
            query.push(QueryParam::new(percent_decode(name), percent_decode(value)));
        }
    }
    Ok((path.to_string(), query))
}

/// Rebuilds the query-string form of `(path, query)`, re-encoding anything
/// that would change how the string splits. `parse_url(serialize_url(..))`
/// returns the original pair.
pub fn serialize_url(path: &str, query: &[QueryParam]) -> String {
    let mut out = path.to_string();
    for (i, param) in query.iter().enumerate() {
        out.push(if i == 0 { '?' } else { '&' });
        out.push_str(&percent_encode(&param.name));
        out.push('=');
        out.push_str(&percent_encode(&param.value));
    }
    out
}

fn percent_decode(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            if let Some(hex) = bytes.get(i + 1..i + 3) {
                if let Ok(b) = u8::from_str_radix(std::str::from_utf8(hex).unwrap_or("zz"), 16) {
                    out.push(b);
                    i += 3;
                    continue;
                }
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    match String::from_utf8(out) {
        Ok(s) => s,
        Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
    }
}

fn percent_encode(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for &b in s.as_bytes() {
        let keep = b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~' | b'/' | b':' | b',');
        if keep {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

fn is_placeholder(segment: &str) -> bool {
    segment.starts_with('{') && segment.ends_with('}') && segment.len() >= 2
}

fn segments(path: &str) -> Vec<&str> {
    path.split('/').skip(1).collect()
}

/// Finds the endpoint template the concrete path conforms to.
///
/// A template matches when it has the same number of segments, its static
/// segments are equal, and its `{param}` segments match anything. With
/// several matches the one with the most static segments wins; remaining
/// ties break lexicographically.
pub fn match_template<'t>(path: &str, templates: &'t [String]) -> Option<&'t str> {
    let path_segs = segments(path);
    let mut best: Option<(usize, &str)> = None;
    for template in templates {
        let tmpl_segs = segments(template);
        if tmpl_segs.len() != path_segs.len() {
            continue;
        }
        let matches = tmpl_segs
            .iter()
            .zip(&path_segs)
            .all(|(t, p)| is_placeholder(t) || t == p);
        if !matches {
            continue;
        }
        let static_count = tmpl_segs.iter().filter(|t| !is_placeholder(t)).count();
        let better = match best {
            None => true,
            Some((best_count, best_tmpl)) => {
                static_count > best_count
                    || (static_count == best_count && template.as_str() < best_tmpl)
            }
        };
        if better {
            best = Some((static_count, template));
        }
    }
    best.map(|(_, t)| t)
}

fn looks_numeric(segment: &str) -> bool {
    let digits = segment
        .strip_prefix(['-', '+'])
        .unwrap_or(segment);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn looks_like_uuid(segment: &str) -> bool {
    let parts: Vec<&str> = segment.split('-').collect();
    if parts.len() != 5 {
        return false;
    }
    let lens = [8, 4, 4, 4, 12];
    parts
        .iter()
        .zip(lens)
        .all(|(p, len)| p.len() == len && p.bytes().all(|b| b.is_ascii_hexdigit()))
}

/// Derives a template from a bare path when no endpoint schema is available:
/// numeric and UUID-shaped segments become `{p<i>}` placeholders indexed by
/// segment position, everything else stays verbatim.
pub fn infer_param_segments(path: &str) -> String {
    if path == "/" {
        return "/".to_string();
    }
    let mut out = String::new();
    for (i, seg) in segments(path).iter().enumerate() {
        out.push('/');
        if looks_numeric(seg) || looks_like_uuid(seg) {
            out.push_str(&format!("{{p{i}}}"));
        } else {
            out.push_str(seg);
        }
    }
    out
}

/// Resolves the template a call's path should be read through: the call's own
/// template first, then a match against the supplied templates, then the
/// inferred fallback.
pub fn resolve_template(call: &HttpCall, templates: Option<&[String]>) -> String {
    if let Some(t) = &call.path_template {
        return t.clone();
    }
    if let Some(templates) = templates {
        if let Some(t) = match_template(&call.path, templates) {
            return t.to_string();
        }
    }
    infer_param_segments(&call.path)
}

/// Splits a template into (segment, is_placeholder) pairs.
pub fn template_segments(template: &str) -> Vec<(String, bool)> {
    segments(template)
        .iter()
        .map(|s| (s.to_string(), is_placeholder(s)))
        .collect()
}
