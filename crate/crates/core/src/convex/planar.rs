//! Areas of planar convex sets given by points or by a support function.

use std::f64::consts::PI;

/// Convex hull of planar points (Andrew's monotone chain), counter-clockwise,
/// collinear points dropped.
pub fn hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a polygon given in order (signed, positive for ccw).
pub fn polygon_signed_area(poly: &[[f64; 2]]) -> f64 {
    let k = poly.len();
    (0..k)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % k]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        * 0.5
}

/// Area of the convex hull of `points`.
pub fn hull_area(points: &[[f64; 2]]) -> f64 {
    polygon_signed_area(&hull_2d(points)).abs()
}

fn clip(poly: &[[f64; 2]], n: [f64; 2], h: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        let (sa, sb) = (n[0] * a[0] + n[1] * a[1] - h, n[0] * b[0] + n[1] * b[1] - h);
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Area of `∩_k {x : η_k · x <= h(η_k)}` over `count` equally spaced unit
/// normals: an upper bound for the area of the body with support `h`.
pub fn circumscribed_area(support: impl Fn([f64; 2]) -> f64, count: usize) -> f64 {
    let normals: Vec<[f64; 2]> = (0..count)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / count as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let values: Vec<f64> = normals.iter().map(|&n| support(n)).collect();
    let r = values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * 4.0 + 1.0;
    let mut poly = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    for (n, h) in normals.iter().zip(&values) {
        poly = clip(&poly, *n, *h);
        if poly.is_empty() {
            return 0.0;
        }
    }
    polygon_signed_area(&poly).abs()
}

/// Area of the hull of support points in `count` equally spaced directions:
/// a lower bound for the area of the body.
pub fn inscribed_area(support_point: impl Fn([f64; 2]) -> [f64; 2], count: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..count)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / count as f64;
            support_point([t.cos(), t.sin()])
        })
        .collect();
    hull_area(&pts)
}
