//! SVG and ASCII pictures of lozenge tilings of `nΔ_2`.

use std::fmt::Write;

use mixsub::lozenge::{LozengeTiling, Point};
use mixsub::{Error, Result};

const DEFAULT_PALETTE: [&str; 10] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45", "#9a6324", "#469990",
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

#[derive(Clone, PartialEq, Debug)]
pub struct RenderOptions {
    pub format: RenderFormat,
    /// Pixels per unit edge.
    pub scale: f64,
    /// Fill color of each color's triangle and path.
    pub palette: Vec<String>,
    /// Draw the path of each color through the rhombi it crosses.
    pub show_dual: bool,
}

impl RenderOptions {
    pub fn new(
        format: RenderFormat,
        scale: f64,
        palette: Option<Vec<String>>,
        show_dual: bool,
        n: usize,
    ) -> Result<RenderOptions> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parse(format!("scale must be positive, got {scale}")));
        }
        let palette = match palette {
            Some(p) if p.len() >= n => p,
            Some(p) => return Err(Error::Parse(format!("palette has {} colors, need {n}", p.len()))),
            None => (0..n)
                .map(|i| DEFAULT_PALETTE[i % DEFAULT_PALETTE.len()].to_string())
                .collect(),
        };
        Ok(RenderOptions {
            format,
            scale,
            palette,
            show_dual,
        })
    }
}

pub fn render(t: &LozengeTiling, opts: &RenderOptions) -> Result<String> {
    match opts.format {
        RenderFormat::Svg => svg(t, opts),
        RenderFormat::Ascii => Ok(ascii(t)),
    }
}

fn color_char(i: usize) -> char {
    char::from_digit(i as u32 + 1, 36).unwrap_or('?')
}

fn orientation_of_up(t: &LozengeTiling) -> std::collections::HashMap<Point, usize> {
    t.rhombi().into_iter().map(|(z, o)| (shift(z, o - 1), o)).collect()
}

fn shift(x: Point, a: usize) -> Point {
    let mut y = x;
    y[a] += 1;
    y
}

/// One text row per horizontal strip, top first. Triangles show their
/// color; rhombus halves show the letter of their orientation, upper case
/// on the upward half and lower case on the downward half.
pub fn ascii(t: &LozengeTiling) -> String {
    let n = t.n();
    let ups = orientation_of_up(t);
    let downs: std::collections::HashMap<Point, usize> = t.rhombi().into_iter().collect();
    let mut out = String::new();
    for r in 0..n {
        let a = n - 1 - r;
        let mut symbols = Vec::new();
        for b in (0..=r).rev() {
            let x = [a, b, r - b];
            let s = match t.triangles().iter().position(|&y| y == x) {
                Some(i) => color_char(i),
                None => (b'A' + ups[&x] as u8 - 1) as char,
            };
            symbols.push(s);
            if b > 0 {
                let z = [a, b - 1, r - b];
                symbols.push((b'a' + downs[&z] as u8 - 1) as char);
            }
        }
        let row: Vec<String> = symbols.iter().map(char::to_string).collect();
        let _ = writeln!(out, "{}{}", " ".repeat(n - 1 - r), row.join(" "));
    }
    out
}

struct Frame {
    n: usize,
    s: f64,
    margin: f64,
}

impl Frame {
    /// Plane position of a lattice point `y` of `nΔ_2` (`Σy = n`), with
    /// `A` on top, `B` lower left and `C` lower right.
    fn at(&self, y: [f64; 3]) -> (f64, f64) {
        let h = 3f64.sqrt() / 2.0;
        let n = self.n as f64;
        let x = y[2] * n + y[0] * n / 2.0;
        let v = (y[1] + y[2]) * n * h;
        (self.margin + x / n * self.s, self.margin + v / n * self.s)
    }

    fn point(&self, p: Point) -> (f64, f64) {
        self.at([p[0] as f64, p[1] as f64, p[2] as f64])
    }
}

fn poly(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn svg(t: &LozengeTiling, opts: &RenderOptions) -> Result<String> {
    let n = t.n();
    let f = Frame {
        n,
        s: opts.scale,
        margin: opts.scale,
    };
    let width = n as f64 * opts.scale + 2.0 * f.margin;
    let height = n as f64 * opts.scale * 3f64.sqrt() / 2.0 + 2.0 * f.margin;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1" stroke-linejoin="round">"#);
    for (z, o) in t.rhombi() {
        let o = o - 1;
        let (p, r) = ((o + 1) % 3, (o + 2) % 3);
        let corner = |a: usize, b: usize| {
            let mut y = z;
            y[a] += 1;
            y[b] += 1;
            f.point(y)
        };
        let pts = [corner(o, p), corner(o, o), corner(o, r), corner(p, r)];
        let _ = writeln!(out, r##"<polygon points="{}" fill="#f4f4f4"/>"##, poly(&pts));
    }
    for (i, &x) in t.triangles().iter().enumerate() {
        let pts: Vec<(f64, f64)> = (0..3).map(|a| f.point(shift(x, a))).collect();
        let _ = writeln!(out, r#"<polygon points="{}" fill="{}"/>"#, poly(&pts), opts.palette[i]);
    }
    let _ = writeln!(out, "</g>");
    if opts.show_dual {
        let _ = writeln!(out, r#"<g fill="none" stroke-width="2">"#);
        for (i, &x) in t.triangles().iter().enumerate() {
            let center = f.at([
                x[0] as f64 + 1.0 / 3.0,
                x[1] as f64 + 1.0 / 3.0,
                x[2] as f64 + 1.0 / 3.0,
            ]);
            for a in 0..3 {
                let mut pts = vec![center];
                let mut y = x;
                loop {
                    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                    let (p, q) = (f.point(shift(y, b)), f.point(shift(y, c)));
                    pts.push(((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0));
                    if y[a] == 0 {
                        break;
                    }
                    let mut z = y;
                    z[a] -= 1;
                    let o = t
                        .rhombi()
                        .into_iter()
                        .find(|&(w, _)| w == z)
                        .map(|(_, o)| o - 1)
                        .ok_or_else(|| Error::MalformedTiling(format!("no rhombus on {z:?}")))?;
                    if o == a {
                        return Err(Error::MalformedTiling(format!("path of color {} turns back", i + 1)));
                    }
                    y = shift(z, o);
                }
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" stroke="{}"/>"#,
                    poly(&pts),
                    opts.palette[i]
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    // The system along the boundary: each boundary edge carries the color
    // whose path ends there.
    let sys = t.system()?;
    let label_size = opts.scale * 0.35;
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="{label_size:.2}" text-anchor="middle" dominant-baseline="middle">"#
    );
    let centroid = f.at([n as f64 / 3.0; 3]);
    for (a, b) in [(2, 1), (1, 3), (3, 2)] {
        let word = sys.perm(a, b);
        for k in 0..n {
            // k-th unit edge from corner a towards corner b.
            let mut p = [0.0; 3];
            p[a - 1] = n as f64 - k as f64 - 0.5;
            p[b - 1] = k as f64 + 0.5;
            let (x, y) = f.at(p);
            let (dx, dy) = (x - centroid.0, y - centroid.1);
            let len = (dx * dx + dy * dy).sqrt().max(1e-9);
            let off = opts.scale * 0.35;
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                x + dx / len * off,
                y + dy / len * off,
                word.apply(k + 1)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}
