use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use piv_core::figures::FigureRun;
use piv_core::rootfind::RootSet;
use rug::Float;

/// Where a command's text goes.
pub struct Emit {
    pub out: Option<PathBuf>,
    pub digits: Option<usize>,
}

impl Emit {
    pub fn text(&self, s: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => write_atomic(path, s),
            None => io::stdout().lock().write_all(s.as_bytes()),
        }
    }
}

/// Write through a temporary file in the same directory and rename it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn number(x: &Float, digits: Option<usize>) -> String {
    match digits {
        Some(d) => x.to_string_radix(10, Some(d.max(1))),
        None => format!("{:?}", x.to_f64()),
    }
}

/// `re,im,cert_radius`.
pub fn roots_csv(roots: &RootSet, digits: Option<usize>) -> String {
    let mut out = String::from("re,im,cert_radius\n");
    for (z, r) in roots.roots.iter().zip(&roots.radii) {
        out += &format!("{},{},{:?}\n", number(z.real(), digits), number(z.imag(), digits), r.to_f64());
    }
    out
}

/// `j,k,re,im`.
pub fn lattice_csv(run: &FigureRun, digits: Option<usize>) -> String {
    match digits {
        None => run.predictions.to_csv(),
        Some(_) => {
            let mut out = String::from("j,k,re,im\n");
            for p in &run.predictions.entries {
                out += &format!("{},{},{},{}\n", p.j, p.k, number(p.alpha.real(), digits), number(p.alpha.imag(), digits));
            }
            out
        }
    }
}
