//! Vertices, neighborhoods, balls and the Hamilton path of a few small graphs.

use lsq::{GraphFamily, Vertex};

fn main() -> lsq::Result<()> {
    let cube = GraphFamily::boolean(4).build()?;
    let v = Vertex::from_bits("0000")?;
    let nbrs: Vec<String> = cube.neighbors(&v)?.iter().map(|w| w.to_bits()).collect();
    println!("{cube}: neighbors of 0000 = {nbrs:?}");

    let grid = GraphFamily::grid(5, 2).build()?;
    let (a, b) = (Vertex::new([1, 1]), Vertex::new([5, 5]));
    println!("{grid}: |{a:?} - {b:?}| = {}", grid.distance(&a, &b)?);
    println!(
        "c(k) for k = 0..5: {:?}",
        (0..5).map(|k| grid.c(k)).collect::<Vec<_>>()
    );

    let ball = grid.ball(&Vertex::new([2, 2]), 1)?;
    println!(
        "boundary of ball((2,2),1): {:?}",
        grid.boundary(&ball).vertices(&grid)
    );

    let sq = GraphFamily::grid(3, 2).build()?;
    let path: Vec<Vertex> = sq.hamilton_path().collect();
    println!("Hamilton path of {sq}: {path:?}");

    let prod: GraphFamily = "line:n=2*grid:n=3,d=2".parse()?;
    let prod = prod.build()?;
    println!(
        "{prod}: N = {}, diameter = {}",
        prod.order(),
        prod.diameter()
    );
    Ok(())
}
