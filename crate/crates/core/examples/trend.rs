//! The q = 5 trend of classnumber S over the main term.

use frobtrace::verify::trend_table;

fn main() -> frobtrace::Result<()> {
    println!(" x  ratio");
    for row in trend_table()? {
        match row.ratio {
            Some(r) => println!("{:>2}  {r:.6}", row.x),
            None => println!("{:>2}  inadmissible u", row.x),
        }
    }
    Ok(())
}
