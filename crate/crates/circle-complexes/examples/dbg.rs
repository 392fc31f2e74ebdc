use circle_complexes::complexes::CauchyData1D;
use circle_complexes::Epsilon;

fn main() {
    let hexes = CauchyData1D::interior_hexagons(4);
    println!("interior hexagons: {}", hexes.len());
    for h in &hexes {
        println!("  {:?}", h);
    }
    let tips: Vec<[i64;3]> = vec![[ -1, 0, 1], [1, -1, 0], [0, 1, -1]];
    for t in &tips {
        let cnt = hexes.iter().filter(|h| h.contains(t)).count();
        println!("tip {:?} in {} hexagons", t, cnt);
    }
    let data = CauchyData1D::regular(4, Epsilon::MinusOne, 1.0);
    println!("regular central residual: {}", data.central_residual());
}
