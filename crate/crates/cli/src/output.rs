//! Files written by the driver: `diagnostics.csv`, `cell_avg_t<T>.csv`,
//! optional `points_t<T>.csv`, and `convergence.csv`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use afvlasov::phase_grid::{histopolate_2d, write_snapshot};
use afvlasov::{ConvergenceRow, DiagnosticsRow, RunObserver, SimConfig, Simulation, SnapshotKind, CSV_HEADER};

use crate::CliError;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CONVERGENCE_HEADER: &str = "n,eps_vp,order";

pub fn snapshot_file_name(kind: SnapshotKind, t: f64) -> String {
    format!("{}_t{t:.6}.csv", kind.name())
}

/// Streams diagnostics rows and snapshots into the output directory.
pub struct FileWriter {
    dir: PathBuf,
    diagnostics: BufWriter<File>,
    histopolate: bool,
}

impl FileWriter {
    pub fn create(cfg: &SimConfig, histopolate: bool) -> Result<Self, CliError> {
        let dir = cfg.output_dir.clone();
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let path = dir.join(DIAGNOSTICS_FILE);
        let mut diagnostics = BufWriter::new(File::create(&path).map_err(|e| CliError::io(&path, e))?);
        writeln!(diagnostics, "{CSV_HEADER}").map_err(|e| CliError::io(&path, e))?;
        Ok(FileWriter {
            dir,
            diagnostics,
            histopolate,
        })
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        let path = self.dir.join(DIAGNOSTICS_FILE);
        self.diagnostics.flush().map_err(|e| CliError::io(&path, e))
    }

    fn write_snapshot_file(&self, sim: &Simulation, kind: SnapshotKind) -> io::Result<()> {
        let cell_avg = sim.cell_averages();
        let data = match kind {
            SnapshotKind::CellAvg => cell_avg,
            SnapshotKind::Points => histopolate_2d(&cell_avg),
        };
        let path = self.dir.join(snapshot_file_name(kind, sim.time()));
        let mut out = BufWriter::new(File::create(&path).map_err(|e| with_path(&path, e))?);
        write_snapshot(&mut out, sim.time(), sim.domain(), kind, &data).map_err(|e| with_path(&path, e))?;
        out.flush().map_err(|e| with_path(&path, e))
    }
}

fn with_path(path: &Path, e: io::Error) -> io::Error {
    io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

impl RunObserver for FileWriter {
    fn diagnostics(&mut self, row: &DiagnosticsRow) -> afvlasov::Result<()> {
        writeln!(self.diagnostics, "{}", row.to_csv_line())
            .map_err(|e| with_path(&self.dir.join(DIAGNOSTICS_FILE), e))?;
        Ok(())
    }

    fn snapshot(&mut self, sim: &Simulation) -> afvlasov::Result<()> {
        self.write_snapshot_file(sim, SnapshotKind::CellAvg)?;
        if self.histopolate {
            self.write_snapshot_file(sim, SnapshotKind::Points)?;
        }
        Ok(())
    }
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in rows {
        let order = r.order.map(|p| format!("{p:e}")).unwrap_or_default();
        out.push_str(&format!("{},{:e},{order}\n", r.n, r.eps_vp));
    }
    out
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}
