// Only the success paths: building a JsError needs a JS host.

use spinwitness_web::{concurrence_curve, gap_temperature_vs_spin, pq_scan};

#[test]
fn exports_return_flat_records() {
    let c = concurrence_curve(1.0, 92.7, 1.0, 200.0, 50).unwrap();
    assert_eq!(c.len(), 150);
    // C23 is entangled at low T once alpha reaches 1
    assert!(c.chunks(3).any(|r| r[2] > 0.0));

    let pq = pq_scan(1.0, -1.0, 20.0, 5.0, 50).unwrap();
    assert_eq!(pq.len(), 200);

    let gap = gap_temperature_vs_spin("tetrahedron", 3).unwrap();
    assert_eq!(gap.len(), 9);
    assert_eq!(gap[0], 0.5);
}
