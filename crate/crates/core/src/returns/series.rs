use std::io::Read;
use std::path::Path;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub date: NaiveDate,
    pub open: f64,
}

/// Opening prices on consecutive trading days.
///
/// Rows are trading days; calendar gaps between them carry no meaning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    ticker: String,
    observations: Vec<Observation>,
}

impl PriceSeries {
    pub fn new(ticker: impl Into<String>, observations: Vec<Observation>) -> Result<Self> {
        if let Some(bad) = observations
            .iter()
            .find(|o| !(o.open > 0.0) || !o.open.is_finite())
        {
            return Err(Error::Malformed(format!(
                "non-positive opening price {} on {}",
                bad.open, bad.date
            )));
        }
        if let Some(w) = observations.windows(2).find(|w| w[0].date >= w[1].date) {
            return Err(Error::Malformed(format!(
                "dates not strictly increasing: {} then {}",
                w[0].date, w[1].date
            )));
        }
        Ok(Self {
            ticker: ticker.into(),
            observations,
        })
    }

    /// Prices on successive days starting 1970-01-01, for synthetic data.
    pub fn from_prices(ticker: impl Into<String>, prices: &[f64]) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date");
        let observations = prices
            .iter()
            .enumerate()
            .map(|(i, &open)| Observation {
                date: start + Days::new(i as u64),
                open,
            })
            .collect();
        Self::new(ticker, observations)
    }

    /// Reads a headered CSV holding at least a `Date` and an `Open` column
    /// (matched case-insensitively, other columns ignored).
    ///
    /// Rows whose opening price is missing, unparsable or not positive are
    /// dropped; a malformed date is an error.
    pub fn from_csv_reader<R: Read>(ticker: impl Into<String>, reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Malformed(format!("missing `{name}` column")))
        };
        let date_col = find("date")?;
        let open_col = find("open")?;

        let mut observations = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let raw_date = record.get(date_col).unwrap_or("");
            let raw_open = record.get(open_col).unwrap_or("");
            let open = match raw_open.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => v,
                _ => continue,
            };
            // vendor exports sometimes append a time of day
            let day = raw_date.split([' ', 'T']).next().unwrap_or("");
            let date = NaiveDate::parse_from_str(day, "%Y-%m-%d").map_err(|e| {
                Error::Malformed(format!("row {}: bad date `{raw_date}`: {e}", row + 2))
            })?;
            observations.push(Observation { date, open });
        }
        Self::new(ticker, observations)
    }

    /// Like [`from_csv_reader`](Self::from_csv_reader); the ticker is the
    /// file stem.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let ticker = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(ticker, std::io::BufReader::new(file))
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn prices(&self) -> impl Iterator<Item = f64> + '_ {
        self.observations.iter().map(|o| o.open)
    }

    pub(crate) fn log_prices(&self) -> Vec<f64> {
        self.prices().map(f64::ln).collect()
    }
}

/// Log returns over a horizon of `dt` trading days.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSample {
    pub dt: usize,
    pub values: Vec<f64>,
}

impl ReturnSample {
    pub fn new(dt: usize, values: Vec<f64>) -> Self {
        Self { dt, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn check_history(len: usize, dt: usize) -> Result<()> {
    if dt == 0 {
        return Err(Error::InvalidParameter("dt must be at least 1".into()));
    }
    if dt >= len {
        return Err(Error::InsufficientHistory {
            needed: dt,
            available: len,
        });
    }
    Ok(())
}

pub(crate) fn log_returns_from_logs(logs: &[f64], dt: usize) -> Vec<f64> {
    logs.iter().zip(&logs[dt..]).map(|(a, b)| b - a).collect()
}

/// `ln S(t + dt) - ln S(t)` for every start index, overlapping windows.
pub fn log_returns(series: &PriceSeries, dt: usize) -> Result<ReturnSample> {
    check_history(series.len(), dt)?;
    Ok(ReturnSample::new(
        dt,
        log_returns_from_logs(&series.log_prices(), dt),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn unit_log_return() {
        let s = PriceSeries::from_prices("X", &[1.0, E]).unwrap();
        assert_eq!(log_returns(&s, 1).unwrap().values, vec![1.0]);
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let s = PriceSeries::from_prices("X", &[3.5; 40]).unwrap();
        let r = log_returns(&s, 7).unwrap();
        assert_eq!(r.len(), 33);
        assert!(r.values.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn two_trading_years_window_count() {
        let prices: Vec<f64> = (0..756).map(|i| 10.0 + i as f64).collect();
        let s = PriceSeries::from_prices("X", &prices).unwrap();
        assert_eq!(log_returns(&s, 504).unwrap().len(), 252);
    }

    #[test]
    fn insufficient_history() {
        let s = PriceSeries::from_prices("X", &[1.0, 2.0, 3.0]).unwrap();
        let err = log_returns(&s, 3).unwrap_err();
        assert!(err.is_insufficient_data());
        assert!(err.to_string().contains("insufficient history"));
        assert!(log_returns(&s, 0).is_err());
    }

    #[test]
    fn minimal_layout() {
        let csv = "date,open\n2024-01-02,10\n2024-01-03,11\n2024-01-05,12.5\n";
        let s = PriceSeries::from_csv_reader("T", csv.as_bytes()).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.observations()[2].open, 12.5);
    }

    #[test]
    fn vendor_layout_drops_missing_prices() {
        let csv = "Date,Open,High,Low,Close,Adj Close,Volume\n\
                   1994-10-19,25.1,25.5,25.0,25.2,10.1,1000\n\
                   1994-10-20,null,null,null,null,null,null\n\
                   1994-10-21,0,1,1,1,1,0\n\
                   1994-10-24,25.3,25.6,25.1,25.4,10.2,1100\n";
        let s = PriceSeries::from_csv_reader("AEP", csv.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.ticker(), "AEP");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            PriceSeries::from_csv_reader("T", "day,price\n2024-01-01,1\n".as_bytes()),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            PriceSeries::from_csv_reader("T", "date,open\n01/02/2024,1\n".as_bytes()),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            PriceSeries::from_csv_reader("T", "date,open\n2024-01-02,1\n2024-01-02,2\n".as_bytes()),
            Err(Error::Malformed(_))
        ));
    }
}
