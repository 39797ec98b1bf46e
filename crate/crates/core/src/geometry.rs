//! Small planar geometry helpers shared across the crate.

/// A point in image coordinates: `x` grows rightwards, `y` grows downwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    /// Column coordinate in pixels.
    pub x: f64,
    /// Row coordinate in pixels.
    pub y: f64,
}

impl Point2 {
    /// Creates a point from pixel coordinates.
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Squared Euclidean distance to `other`.
    pub fn distance_sq(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Euclidean distance to `other`.
    pub fn distance(self, other: Point2) -> f64 {
        libm::sqrt(self.distance_sq(other))
    }
}

/// Frame dimensions in pixels. `height` is the number of rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSize {
    /// Number of rows.
    pub height: usize,
    /// Number of columns.
    pub width: usize,
}

impl FrameSize {
    /// Creates a frame size.
    pub const fn new(height: usize, width: usize) -> Self {
        FrameSize { height, width }
    }

    /// True when `p` lies inside `[0, width) x [0, height)`.
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= 0.0 && p.y >= 0.0 && p.x < self.width as f64 && p.y < self.height as f64
    }
}

/// Squared distance from `p` to the closed segment `a..b`.
///
/// Degenerate segments (`a == b`) reduce to point distance.
pub fn point_segment_distance_sq(p: Point2, a: Point2, b: Point2) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len_sq = dx * dx + dy * dy;
    if len_sq == 0.0 {
        return p.distance_sq(a);
    }
    let t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
    let t = t.clamp(0.0, 1.0);
    let cx = a.x + t * dx;
    let cy = a.y + t * dy;
    p.distance_sq(Point2::new(cx, cy))
}

/// Distance from `p` to the closed segment `a..b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    libm::sqrt(point_segment_distance_sq(p, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn segment_distance_interior_projection() {
        // Foot of the perpendicular from (5, 3) onto the x axis segment.
        let d = point_segment_distance(
            Point2::new(5.0, 3.0),
            Point2::new(0.0, 0.0),
            Point2::new(10.0, 0.0),
        );
        assert_relative_eq!(d, 3.0);
    }

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(10.0, 0.0);
        // Beyond b: distance is to b itself.
        let d = point_segment_distance(Point2::new(13.0, 4.0), a, b);
        assert_relative_eq!(d, 5.0);
        // Before a.
        let d = point_segment_distance(Point2::new(-3.0, -4.0), a, b);
        assert_relative_eq!(d, 5.0);
    }

    #[test]
    fn segment_distance_degenerate() {
        let a = Point2::new(2.0, 2.0);
        let d = point_segment_distance(Point2::new(5.0, 6.0), a, a);
        assert_relative_eq!(d, 5.0);
    }
}
