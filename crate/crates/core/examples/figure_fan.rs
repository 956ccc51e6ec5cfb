//! Energy-versus-coupling fan of the ten lowest toy-model levels, printed as
//! CSV on standard output. Redirect to a file and plot `E` against `g`.

use ptcal::model::ModelId;
use ptcal::spectra::{figure_data, linear_grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = linear_grid(-0.45, 10.0, 60);
    let data = figure_data(ModelId::Toy3, &grid, 10)?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for row in &data.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    for (g, err) in &data.flagged {
        eprintln!("skipped g = {g}: {err}");
    }
    Ok(())
}
