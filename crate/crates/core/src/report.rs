//! Text rendering of exact times.

use num_traits::Signed;

use crate::model::Time;

/// `p/q`, or just `p` for integers.
pub fn ratio_text(t: &Time) -> String {
    if t.is_integer() {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

/// Decimal rounded half away from zero to `places` digits.
pub fn ratio_decimal(t: &Time, places: u32) -> String {
    let scale = 10i128.pow(places);
    let (p, q) = (*t.numer() as i128, *t.denom() as i128);
    let scaled = (p.abs() * scale * 2 + q) / (2 * q);
    let sign = if t.is_negative() && scaled != 0 {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{scaled}");
    }
    format!(
        "{sign}{}.{:0width$}",
        scaled / scale,
        scaled % scale,
        width = places as usize
    )
}

/// `p/q (d.dddd)` as shown in human-readable tables.
pub fn ratio_display(t: &Time) -> String {
    format!("{} ({})", ratio_text(t), ratio_decimal(t, 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn renders() {
        assert_eq!(ratio_text(&Ratio::new(4, 1)), "4");
        assert_eq!(ratio_text(&Ratio::new(6, 4)), "3/2");
        assert_eq!(ratio_decimal(&Ratio::new(2, 3), 4), "0.6667");
        assert_eq!(ratio_decimal(&Ratio::new(1, 8), 2), "0.13");
        assert_eq!(ratio_decimal(&Ratio::new(-1, 3), 4), "-0.3333");
        assert_eq!(ratio_decimal(&Ratio::new(7, 2), 0), "4");
        assert_eq!(ratio_display(&Ratio::new(5, 4)), "5/4 (1.2500)");
    }
}
