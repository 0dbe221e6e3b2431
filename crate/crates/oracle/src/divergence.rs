//! Detection of unbounded growth from sampled intensities.

/// Settings of the growth monitor; times are in units of `1/J`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceMonitor {
    /// Sampling interval.
    pub sample: f64,
    /// Look-back windows; growth is flagged when the intensity doubled over
    /// [`DivergenceMonitor::doublings`] consecutive windows of one length.
    pub windows: Vec<f64>,
    pub doublings: usize,
    /// Intensities below this are ignored as the base of a doubling chain.
    pub floor: f64,
    /// Population on the truncation boundary that, together with intensity
    /// growth over the shortest window, signals escape to the boundary.
    pub edge_fraction: f64,
}

impl Default for DivergenceMonitor {
    fn default() -> Self {
        Self { sample: 0.25, windows: vec![0.5, 2.0, 8.0, 32.0], doublings: 4, floor: 1e-3, edge_fraction: 0.05 }
    }
}

/// Running record of samples `(t, intensity, edge population)`.
#[derive(Debug, Clone)]
pub struct GrowthTrace {
    monitor: DivergenceMonitor,
    /// Sampling interval in absolute time.
    dt: f64,
    samples: Vec<(f64, f64, f64)>,
}

impl GrowthTrace {
    pub fn new(monitor: DivergenceMonitor, j: f64) -> Self {
        let dt = monitor.sample / j;
        Self { monitor, dt, samples: Vec::new() }
    }

    pub fn interval(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[(f64, f64, f64)] {
        &self.samples
    }

    /// Record a sample; returns the reason if it completes a divergence signature.
    pub fn push(&mut self, t: f64, intensity: f64, edge: f64) -> Option<String> {
        self.samples.push((t, intensity, edge));
        if !intensity.is_finite() {
            return Some("non-finite intensity".into());
        }
        let last = self.samples.len() - 1;
        let m = &self.monitor;
        for &w in &m.windows {
            let lag = (w / m.sample).round() as usize;
            if lag == 0 || last < lag * m.doublings {
                continue;
            }
            let chain: Vec<f64> = (0..=m.doublings).map(|k| self.samples[last - k * lag].1).collect();
            if chain[m.doublings] >= m.floor && chain.windows(2).all(|c| c[0] >= 2.0 * c[1]) {
                return Some(format!("intensity doubled {} times in windows of {w}/J", m.doublings));
            }
        }
        let lag = (m.windows.iter().cloned().fold(f64::INFINITY, f64::min) / m.sample).round() as usize;
        if edge >= m.edge_fraction && last >= lag && lag > 0 {
            let rising = self.samples[last - lag..].windows(2).all(|s| s[1].1 > s[0].1);
            if rising {
                return Some(format!("population {edge:.3} on the truncation boundary while intensity grows"));
            }
        }
        None
    }
}
