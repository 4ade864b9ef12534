fn main() { println!("beamalloc"); }
