//! Input data containers: the NPI activation panel and the observed count
//! series with per-cell observation masks.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::epi::{DelaySpec, GenerationInterval};
use crate::grid::Grid;
use crate::{Error, Result};

/// Which observation stream a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stream {
    Cases,
    Deaths,
}

impl Stream {
    pub const BOTH: [Stream; 2] = [Stream::Cases, Stream::Deaths];
}

/// Fixed epidemiological parameters shared by every model variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpiParams {
    pub gi: GenerationInterval,
    pub case_delay: DelaySpec,
    pub death_delay: DelaySpec,
}

impl Default for EpiParams {
    fn default() -> Self {
        Self {
            gi: GenerationInterval::default(),
            case_delay: DelaySpec::case_default(),
            death_delay: DelaySpec::death_default(),
        }
    }
}

impl EpiParams {
    pub fn delay(&self, stream: Stream) -> &DelaySpec {
        match stream {
            Stream::Cases => &self.case_delay,
            Stream::Deaths => &self.death_delay,
        }
    }
}

/// Binary NPI activation tensor with names, country codes and calendar dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpiPanel {
    npi_names: Vec<String>,
    countries: Vec<String>,
    dates: Vec<NaiveDate>,
    /// One `(day, country)` grid per NPI.
    active: Vec<Grid<bool>>,
}

impl NpiPanel {
    pub fn new(
        npi_names: Vec<String>,
        countries: Vec<String>,
        dates: Vec<NaiveDate>,
        active: Vec<Grid<bool>>,
    ) -> Result<Self> {
        if active.len() != npi_names.len() {
            return Err(Error::Shape(format!(
                "{} activation grids for {} NPI names",
                active.len(),
                npi_names.len()
            )));
        }
        for (name, grid) in npi_names.iter().zip(&active) {
            if grid.n_days() != dates.len() || grid.n_countries() != countries.len() {
                return Err(Error::Shape(format!(
                    "activation grid for '{name}' is {}x{}, want {}x{}",
                    grid.n_days(),
                    grid.n_countries(),
                    dates.len(),
                    countries.len()
                )));
            }
        }
        check_contiguous_dates(&dates)?;
        Ok(Self {
            npi_names,
            countries,
            dates,
            active,
        })
    }

    /// All-inactive panel over the given frame.
    pub fn zeros(npi_names: Vec<String>, countries: Vec<String>, dates: Vec<NaiveDate>) -> Result<Self> {
        let grids = npi_names
            .iter()
            .map(|_| Grid::fill(dates.len(), countries.len(), false))
            .collect();
        Self::new(npi_names, countries, dates, grids)
    }

    pub fn n_npis(&self) -> usize {
        self.npi_names.len()
    }

    pub fn n_days(&self) -> usize {
        self.dates.len()
    }

    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    pub fn npi_names(&self) -> &[String] {
        &self.npi_names
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    #[inline]
    pub fn is_active(&self, npi: usize, day: usize, country: usize) -> bool {
        *self.active[npi].get(day, country)
    }

    pub fn set_active(&mut self, npi: usize, day: usize, country: usize, value: bool) {
        self.active[npi].set(day, country, value);
    }

    pub fn activation_grid(&self, npi: usize) -> &Grid<bool> {
        &self.active[npi]
    }

    pub fn country_index(&self, code: &str) -> Result<usize> {
        self.countries
            .iter()
            .position(|c| c == code)
            .ok_or_else(|| Error::Lookup(format!("unknown country code '{code}'")))
    }

    pub fn npi_index(&self, name: &str) -> Result<usize> {
        self.npi_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Lookup(format!("unknown NPI '{name}'")))
    }

    /// Days and countries with NPI `npi` active.
    pub fn active_set(&self, npi: usize) -> Vec<(usize, usize)> {
        self.active[npi]
            .iter_indexed()
            .filter(|(_, _, on)| **on)
            .map(|(t, c, _)| (t, c))
            .collect()
    }

    /// First day on which any NPI switches off after having been on in
    /// `country`, if any.
    pub fn first_lift_day(&self, country: usize) -> Option<usize> {
        (1..self.n_days()).find(|&t| {
            (0..self.n_npis())
                .any(|i| self.is_active(i, t - 1, country) && !self.is_active(i, t, country))
        })
    }

    /// Panel restricted to the given NPI indices (in the given order).
    pub fn subset_npis(&self, npis: &[usize]) -> Self {
        Self {
            npi_names: npis.iter().map(|&i| self.npi_names[i].clone()).collect(),
            countries: self.countries.clone(),
            dates: self.dates.clone(),
            active: npis.iter().map(|&i| self.active[i].clone()).collect(),
        }
    }

    /// Panel restricted to the given country indices (in the given order).
    pub fn subset_countries(&self, keep: &[usize]) -> Self {
        Self {
            npi_names: self.npi_names.clone(),
            countries: keep.iter().map(|&c| self.countries[c].clone()).collect(),
            dates: self.dates.clone(),
            active: self
                .active
                .iter()
                .map(|g| Grid::from_fn(self.n_days(), keep.len(), |t, k| *g.get(t, keep[k])))
                .collect(),
        }
    }
}

/// Daily reported cases and deaths with per-cell observation masks.
///
/// A mask entry of `true` means the cell enters the likelihood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountData {
    countries: Vec<String>,
    dates: Vec<NaiveDate>,
    cases: Grid<u32>,
    deaths: Grid<u32>,
    case_mask: Grid<bool>,
    death_mask: Grid<bool>,
}

impl CountData {
    pub fn new(
        countries: Vec<String>,
        dates: Vec<NaiveDate>,
        cases: Grid<u32>,
        deaths: Grid<u32>,
    ) -> Result<Self> {
        if cases.n_days() != dates.len()
            || cases.n_countries() != countries.len()
            || !cases.same_shape(&deaths)
        {
            return Err(Error::Shape(format!(
                "count grids {}x{} / {}x{} do not match {} dates x {} countries",
                cases.n_days(),
                cases.n_countries(),
                deaths.n_days(),
                deaths.n_countries(),
                dates.len(),
                countries.len()
            )));
        }
        check_contiguous_dates(&dates)?;
        let mask = Grid::fill(dates.len(), countries.len(), true);
        Ok(Self {
            countries,
            dates,
            cases,
            deaths,
            case_mask: mask.clone(),
            death_mask: mask,
        })
    }

    pub fn n_days(&self) -> usize {
        self.dates.len()
    }

    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn counts(&self, stream: Stream) -> &Grid<u32> {
        match stream {
            Stream::Cases => &self.cases,
            Stream::Deaths => &self.deaths,
        }
    }

    pub fn mask(&self, stream: Stream) -> &Grid<bool> {
        match stream {
            Stream::Cases => &self.case_mask,
            Stream::Deaths => &self.death_mask,
        }
    }

    pub fn mask_mut(&mut self, stream: Stream) -> &mut Grid<bool> {
        match stream {
            Stream::Cases => &mut self.case_mask,
            Stream::Deaths => &mut self.death_mask,
        }
    }

    #[inline]
    pub fn observed(&self, stream: Stream, day: usize, country: usize) -> bool {
        *self.mask(stream).get(day, country)
    }

    pub fn n_observed(&self, stream: Stream) -> usize {
        self.mask(stream).as_slice().iter().filter(|m| **m).count()
    }

    pub fn country_index(&self, code: &str) -> Result<usize> {
        self.countries
            .iter()
            .position(|c| c == code)
            .ok_or_else(|| Error::Lookup(format!("unknown country code '{code}'")))
    }

    pub fn subset_countries(&self, keep: &[usize]) -> Self {
        let pick_u32 =
            |g: &Grid<u32>| Grid::from_fn(self.n_days(), keep.len(), |t, k| *g.get(t, keep[k]));
        let pick_bool =
            |g: &Grid<bool>| Grid::from_fn(self.n_days(), keep.len(), |t, k| *g.get(t, keep[k]));
        Self {
            countries: keep.iter().map(|&c| self.countries[c].clone()).collect(),
            dates: self.dates.clone(),
            cases: pick_u32(&self.cases),
            deaths: pick_u32(&self.deaths),
            case_mask: pick_bool(&self.case_mask),
            death_mask: pick_bool(&self.death_mask),
        }
    }

    /// Checks this series shares the panel's frame (countries and dates).
    pub fn check_aligned(&self, panel: &NpiPanel) -> Result<()> {
        if self.countries != panel.countries() || self.dates != panel.dates() {
            return Err(Error::Shape(
                "count data and NPI panel cover different countries or dates".into(),
            ));
        }
        Ok(())
    }
}

fn check_contiguous_dates(dates: &[NaiveDate]) -> Result<()> {
    if dates.is_empty() {
        return Err(Error::Shape("date range is empty".into()));
    }
    let missing: Vec<String> = dates
        .windows(2)
        .flat_map(|w| {
            let mut gap = Vec::new();
            let mut d = w[0].succ_opt().unwrap();
            while d < w[1] {
                gap.push(d.to_string());
                d = d.succ_opt().unwrap();
            }
            if w[1] <= w[0] {
                gap.push(format!("non-increasing date {}", w[1]));
            }
            gap
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::Parse(format!(
            "date range has gaps or disorder: [{}]",
            missing.join(", ")
        )));
    }
    Ok(())
}

/// Consecutive dates starting at `start`.
pub fn date_range(start: NaiveDate, n_days: usize) -> Vec<NaiveDate> {
    (0..n_days)
        .map(|k| start + chrono::Days::new(k as u64))
        .collect()
}

/// Default first day used by synthetic datasets.
pub fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).unwrap()
}
