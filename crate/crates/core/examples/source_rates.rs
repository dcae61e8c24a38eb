//! Pair generation rate and heralding efficiency from singles and coincidences, plus the
//! pump peak power and coupling strength at full power.

use spdc_studio::measurement::{rates_summary, RateRecord};
use spdc_studio::optics::{coupling_coefficient, peak_power, PumpSpec};

fn main() -> spdc_studio::Result<()> {
    let rec = RateRecord { singles_1: 20e3, singles_2: 20e3, coincidences: 6e3, pump_power: 1e-3 };
    let r = rates_summary(&rec)?;
    println!("generation rate      {:.1} kHz/mW", r.generation_rate / (rec.pump_power * 1e3) / 1e3);
    println!("heralding efficiency {:.3}", r.heralding_efficiency);

    let mut pump = PumpSpec::default();
    pump.average_power = 0.62;
    println!("peak power           {:.1} kW", peak_power(&pump, 90e-15)? * 1e-3);
    println!("coupling at 620 mW   {:.2}", coupling_coefficient(0.62, 0.05, 0.5)?);
    Ok(())
}
