//! Minimal rasterization for preview images: discs for joints, Bresenham
//! segments for skeleton edges. Coordinates round to the nearest pixel and
//! anything off-frame is clipped, never an error.

use toolpose_core::augment::Frame;
use toolpose_core::{InstrumentAnnotation, Point2, SkeletonSpec};

/// Distinct instrument colors, cycled when a scene has more instruments.
pub const PALETTE: [[u8; 3]; 6] = [
    [230, 80, 60],
    [70, 160, 235],
    [90, 200, 120],
    [240, 200, 70],
    [190, 110, 220],
    [250, 140, 50],
];

fn put(frame: &mut Frame, x: i64, y: i64, rgb: [u8; 3]) {
    if x >= 0 && y >= 0 && (x as usize) < frame.width && (y as usize) < frame.height {
        frame.set_pixel(x as usize, y as usize, rgb);
    }
}

/// Filled disc centered at `p`.
pub fn disc(frame: &mut Frame, p: Point2, radius: i64, rgb: [u8; 3]) {
    let (cx, cy) = (p.x.round() as i64, p.y.round() as i64);
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            if dx * dx + dy * dy <= radius * radius {
                put(frame, cx + dx, cy + dy, rgb);
            }
        }
    }
}

/// One-pixel segment from `a` to `b` (Bresenham).
pub fn segment(frame: &mut Frame, a: Point2, b: Point2, rgb: [u8; 3]) {
    let (mut x0, mut y0) = (a.x.round() as i64, a.y.round() as i64);
    let (x1, y1) = (b.x.round() as i64, b.y.round() as i64);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        put(frame, x0, y0, rgb);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Draws every instrument: edges first, then joint discs on top, one palette
/// color per instrument.
pub fn draw_instruments(
    frame: &mut Frame,
    instruments: &[InstrumentAnnotation],
    skeleton: &SkeletonSpec,
) {
    for (i, ann) in instruments.iter().enumerate() {
        let rgb = PALETTE[i % PALETTE.len()];
        for &(a, b) in skeleton.edges() {
            let pa = ann.get(&skeleton.joint_names()[a]);
            let pb = ann.get(&skeleton.joint_names()[b]);
            if let (Some(pa), Some(pb)) = (pa, pb) {
                segment(frame, pa, pb, rgb);
            }
        }
        for (_, p) in ann.joints() {
            disc(frame, p, 3, rgb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_keeps_offscreen_geometry_silent() {
        let mut f = Frame::zeros(8, 8);
        disc(&mut f, Point2::new(-10.0, -10.0), 3, [255, 0, 0]);
        segment(&mut f, Point2::new(-5.0, 4.0), Point2::new(20.0, 4.0), [0, 255, 0]);
        // The horizontal segment crosses the frame; the disc does not.
        assert_eq!(f.pixel(0, 4), [0, 255, 0]);
        assert_eq!(f.pixel(7, 4), [0, 255, 0]);
        assert_eq!(f.pixel(0, 0), [0, 0, 0]);
    }

    #[test]
    fn segment_endpoints_are_painted() {
        let mut f = Frame::zeros(16, 16);
        segment(&mut f, Point2::new(2.0, 3.0), Point2::new(12.0, 9.0), [9, 9, 9]);
        assert_eq!(f.pixel(2, 3), [9, 9, 9]);
        assert_eq!(f.pixel(12, 9), [9, 9, 9]);
    }

    #[test]
    fn instruments_paint_their_joints() {
        let skel = SkeletonSpec::endovis();
        let mut ann = InstrumentAnnotation::new();
        for (i, name) in skel.joint_names().iter().enumerate() {
            ann.set(name.clone(), Point2::new(10.0 + 20.0 * i as f64, 30.0));
        }
        let mut f = Frame::zeros(120, 60);
        draw_instruments(&mut f, &[ann], &skel);
        assert_eq!(f.pixel(10, 30), PALETTE[0]);
        assert_eq!(f.pixel(90, 30), PALETTE[0]);
    }
}
