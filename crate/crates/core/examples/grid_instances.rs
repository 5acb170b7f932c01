//! The three grid generators: integer split, block threading and the
//! improved 2-D walk.

use lsq::adversary::{block_threaded_walk, grid_walk_integer, walk2d_improved, BlockConfig};

fn main() -> lsq::Result<()> {
    let p = grid_walk_integer(16, 2, 1, 7)?;
    println!(
        "[16]^1 x [16]^1: T = {}, unique = {}",
        p.t_len(),
        p.verify_unique_local_min()?.unique
    );

    let cfg = BlockConfig {
        n: 81,
        d: 2,
        r: 0.5,
    };
    let b = block_threaded_walk(cfg, 7)?;
    println!(
        "block walk n = 81: alpha = {}, beta = {}, T = {}, path {} vertices, {} block changes",
        cfg.alpha(),
        cfg.beta(),
        cfg.t_len(),
        b.path().len(),
        b.segments().len()
    );
    for s in b.segments().iter().take(3) {
        println!(
            "  axis {} sign {:+} length {}",
            s.axis,
            s.sign,
            s.positions.len()
        );
    }
    println!("unique = {}", b.verify_unique_local_min()?.unique);

    let w = walk2d_improved(243, 7)?;
    println!(
        "2-D walk n = 243: block side {}, {} steps, path {} vertices, unique = {}",
        w.block_side(),
        w.steps().len(),
        w.path().len(),
        w.verify_unique_local_min()?.unique
    );
    if let Err(e) = walk2d_improved(1000, 7) {
        println!("n = 1000: {e}");
    }
    Ok(())
}
