fn main() {
    let _ = kaczeros::Mat64::identity(1);
}
