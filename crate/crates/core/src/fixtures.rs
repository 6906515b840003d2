//! Reference bodies used across tests, examples, and the oracle suites.

use crate::linalg::Vector;
use crate::polytope::Polytope;

fn v(coords: &[f64]) -> Vector {
    Vector::new(coords.to_vec())
}

/// Side 1, vertices at the origin, (1, 0), and the apex above.
pub fn equilateral_triangle() -> Polytope {
    let s3 = 3.0f64.sqrt();
    Polytope::from_vertices(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.5, s3 / 2.0])])
        .expect("equilateral triangle")
}

/// Legs 1 along the axes, right angle at the origin.
pub fn right_isoceles_triangle() -> Polytope {
    Polytope::from_vertices(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])])
        .expect("right isoceles triangle")
}

/// [0, 1]^2.
pub fn unit_square() -> Polytope {
    Polytope::from_vertices(
        2,
        vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[1.0, 1.0]), v(&[0.0, 1.0])],
    )
    .expect("unit square")
}

/// Regular n-gon inscribed in the unit circle, one vertex at (1, 0).
pub fn regular_polygon(n: usize) -> Polytope {
    assert!(n >= 3, "a polygon needs at least three vertices");
    let pts = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            v(&[th.cos(), th.sin()])
        })
        .collect();
    Polytope::from_vertices(2, pts).expect("regular polygon")
}

/// Edge 1, one face in the z = 0 plane.
pub fn regular_tetrahedron() -> Polytope {
    let s3 = 3.0f64.sqrt();
    let s6 = 6.0f64.sqrt();
    Polytope::from_vertices(
        3,
        vec![
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.5, s3 / 2.0, 0.0]),
            v(&[0.5, s3 / 6.0, s6 / 3.0]),
        ],
    )
    .expect("regular tetrahedron")
}

/// [0, 1]^3.
pub fn unit_cube() -> Polytope {
    let mut pts = Vec::with_capacity(8);
    for i in 0..8u32 {
        pts.push(v(&[
            (i & 1) as f64,
            ((i >> 1) & 1) as f64,
            ((i >> 2) & 1) as f64,
        ]));
    }
    Polytope::from_vertices(3, pts).expect("unit cube")
}

/// [0, 1]^4.
pub fn unit_tesseract() -> Polytope {
    let mut pts = Vec::with_capacity(16);
    for i in 0..16u32 {
        pts.push(v(&[
            (i & 1) as f64,
            ((i >> 1) & 1) as f64,
            ((i >> 2) & 1) as f64,
            ((i >> 3) & 1) as f64,
        ]));
    }
    Polytope::from_vertices(4, pts).expect("unit tesseract")
}

/// Named planar bodies, the domain of the exhaustive grid oracle.
pub fn planar_fixtures() -> Vec<(&'static str, Polytope)> {
    vec![
        ("equilateral-triangle", equilateral_triangle()),
        ("right-isoceles-triangle", right_isoceles_triangle()),
        ("unit-square", unit_square()),
        ("regular-pentagon", regular_polygon(5)),
    ]
}

/// Every named fixture body across dimensions.
pub fn all_fixtures() -> Vec<(&'static str, Polytope)> {
    let mut out = planar_fixtures();
    out.push(("regular-tetrahedron", regular_tetrahedron()));
    out.push(("unit-cube", unit_cube()));
    out
}
