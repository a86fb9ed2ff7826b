//! Number formatting and serialization shared by the commands.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Pretty JSON with every float in scientific notation, 8 significant digits.
struct SciFormatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident),*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
                self.0.$name(w)
            }
        )*
    };
}

impl Formatter for SciFormatter<'_> {
    delegate!(begin_array, end_array, begin_object, end_object, end_array_value, end_object_value, begin_object_value);

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", sci8(value))
    }
}

pub fn sci8(x: f64) -> String {
    format!("{x:.7e}")
}

/// `x` with `digits` significant digits in plain decimal notation where
/// reasonable.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return "NaN".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - exp;
    if (0..=12).contains(&decimals) {
        format!("{x:.*}", decimals as usize)
    } else {
        format!("{x:.*e}", digits - 1)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializable value");
    let mut s = String::from_utf8(buf).expect("utf-8 JSON");
    s.push('\n');
    s
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> minres::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| minres::Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
