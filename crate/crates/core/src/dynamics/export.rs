//! CSV export of trajectories.

use std::io::Write;

use super::Trajectory;

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Trajectory {
    /// Header `t,x1,x2,x3,x4,v1,v2,v3,v4` followed by monitor names in
    /// sorted order; floats carry 17 significant digits.
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = ["t", "x1", "x2", "x3", "x4", "v1", "v2", "v3", "v4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(self.monitors.keys().cloned());
        out.write_record(&header)?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut row = vec![float(s.t)];
            row.extend(s.x.iter().chain(&s.v).map(|&c| float(c)));
            row.extend(
                self.monitors
                    .values()
                    .map(|series| series.get(i).map_or_else(String::new, |&c| float(c))),
            );
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}
