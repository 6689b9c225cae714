//! Zero-contour extraction on regular grids (marching squares) plus a
//! segment-intersection helper for locating nullcline crossings.

pub type Pt = (f64, f64);

fn lerp_zero(a: f64, b: f64, fa: f64, fb: f64) -> f64 {
    // fa and fb straddle zero
    let t = fa / (fa - fb);
    a + t * (b - a)
}

/// Zero-level polylines of a scalar field sampled at `field[j*nx + i]` for
/// grid point `(xs[i], ys[j])`. Cell saddles are disambiguated by the sign
/// of the cell-center average.
pub fn zero_contours(xs: &[f64], ys: &[f64], field: &[f64]) -> Vec<Vec<Pt>> {
    let nx = xs.len();
    let ny = ys.len();
    debug_assert_eq!(field.len(), nx * ny);
    let mut segments: Vec<(Pt, Pt)> = Vec::new();

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let v00 = field[j * nx + i];
            let v10 = field[j * nx + i + 1];
            let v01 = field[(j + 1) * nx + i];
            let v11 = field[(j + 1) * nx + i + 1];
            let (x0, x1) = (xs[i], xs[i + 1]);
            let (y0, y1) = (ys[j], ys[j + 1]);

            let mut case = 0u8;
            if v00 > 0.0 {
                case |= 1;
            }
            if v10 > 0.0 {
                case |= 2;
            }
            if v11 > 0.0 {
                case |= 4;
            }
            if v01 > 0.0 {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }

            // crossing points on the four cell edges
            let bottom = || (lerp_zero(x0, x1, v00, v10), y0);
            let top = || (lerp_zero(x0, x1, v01, v11), y1);
            let left = || (x0, lerp_zero(y0, y1, v00, v01));
            let right = || (x1, lerp_zero(y0, y1, v10, v11));

            match case {
                1 | 14 => segments.push((left(), bottom())),
                2 | 13 => segments.push((bottom(), right())),
                3 | 12 => segments.push((left(), right())),
                4 | 11 => segments.push((right(), top())),
                6 | 9 => segments.push((bottom(), top())),
                7 | 8 => segments.push((top(), left())),
                5 | 10 => {
                    // saddle: resolve by center sign
                    let center = 0.25 * (v00 + v10 + v01 + v11);
                    let flip = (center > 0.0) == (case == 5);
                    if flip {
                        segments.push((left(), top()));
                        segments.push((bottom(), right()));
                    } else {
                        segments.push((left(), bottom()));
                        segments.push((right(), top()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    chain_segments(segments)
}

fn key(p: Pt) -> (i64, i64) {
    ((p.0 * 1e9).round() as i64, (p.1 * 1e9).round() as i64)
}

/// Join shared endpoints into polylines.
fn chain_segments(segments: Vec<(Pt, Pt)>) -> Vec<Vec<Pt>> {
    use std::collections::HashMap;
    let mut at: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, seg) in segments.iter().enumerate() {
        at.entry(key(seg.0)).or_default().push(k);
        at.entry(key(seg.1)).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = vec![segments[start].0, segments[start].1];
        // grow forward from the tail, then backward from the head
        for dir in 0..2 {
            loop {
                let tip = if dir == 0 {
                    *line.last().unwrap()
                } else {
                    line[0]
                };
                let Some(cands) = at.get(&key(tip)) else {
                    break;
                };
                let Some(&next) = cands.iter().find(|&&k| !used[k]) else {
                    break;
                };
                used[next] = true;
                let (a, b) = segments[next];
                let far = if key(a) == key(tip) { b } else { a };
                if dir == 0 {
                    line.push(far);
                } else {
                    line.insert(0, far);
                }
            }
        }
        out.push(line);
    }
    out
}

/// All pairwise intersection points between two polyline families.
pub fn polyline_intersections(a: &[Vec<Pt>], b: &[Vec<Pt>]) -> Vec<Pt> {
    let mut out = Vec::new();
    let segs = |lines: &[Vec<Pt>]| -> Vec<(Pt, Pt)> {
        lines
            .iter()
            .flat_map(|l| l.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
            .collect()
    };
    let sa = segs(a);
    let sb = segs(b);
    for &(p1, p2) in &sa {
        let (axl, axh) = (p1.0.min(p2.0), p1.0.max(p2.0));
        let (ayl, ayh) = (p1.1.min(p2.1), p1.1.max(p2.1));
        for &(q1, q2) in &sb {
            if q1.0.min(q2.0) > axh
                || q1.0.max(q2.0) < axl
                || q1.1.min(q2.1) > ayh
                || q1.1.max(q2.1) < ayl
            {
                continue;
            }
            if let Some(p) = segment_intersection(p1, p2, q1, q2) {
                out.push(p);
            }
        }
    }
    out
}

fn segment_intersection(p1: Pt, p2: Pt, q1: Pt, q2: Pt) -> Option<Pt> {
    let r = (p2.0 - p1.0, p2.1 - p1.1);
    let s = (q2.0 - q1.0, q2.1 - q1.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return None;
    }
    let qp = (q1.0 - p1.0, q1.1 - p1.1);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((p1.0 + t * r.0, p1.1 + t * r.1))
    } else {
        None
    }
}
