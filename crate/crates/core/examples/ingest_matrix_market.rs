//! Reading Matrix Market and dense CSV inputs, including symmetric expansion and errors.

use std::io::Cursor;

use curnys::bench::ingest;

const COORDINATE: &str = "%%MatrixMarket matrix coordinate real symmetric
% 3 x 3 symmetric, lower triangle stored
3 3 4
1 1 2.0
2 1 -1.0
2 2 2.0
3 3 1.5
";

const ARRAY: &str = "%%MatrixMarket matrix array real general
2 3
1
4
2
5
3
6
";

fn main() -> curnys::Result<()> {
    let a = ingest::read_matrix_market(Cursor::new(COORDINATE), 100)?;
    println!("coordinate symmetric:{a}");
    let b = ingest::read_matrix_market(Cursor::new(ARRAY), 100)?;
    println!("array (column-major on disk):{b}");
    let c = ingest::read_dense_csv(Cursor::new("1,2,3\n4,5,6\n"), 100)?;
    println!("dense csv equals array file: {}", b == c);

    let bad = ARRAY.replace("\n5\n", "\nfive\n");
    match ingest::read_matrix_market(Cursor::new(bad), 100) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("malformed input: {e}"),
    }
    match ingest::read_matrix_market(Cursor::new(ARRAY), 2) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("over the dimension cap: {e}"),
    }
    Ok(())
}
