/// Maps a glucose reading (mg/dL) to a reward in `[0, 1]`: zero at or below
/// 80 and at or above 180, one on `[90, 130]`, linear in between.
pub fn glucose_reward(cgm: f64) -> f64 {
    if cgm <= 80.0 {
        0.0
    } else if cgm <= 90.0 {
        (cgm - 80.0) / 10.0
    } else if cgm <= 130.0 {
        1.0
    } else if cgm <= 180.0 {
        (180.0 - cgm) / 50.0
    } else {
        0.0
    }
}
