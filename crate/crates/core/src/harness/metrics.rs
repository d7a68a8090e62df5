use serde::{Deserialize, Serialize};

/// `out[n] = mean(series[max(0, n−window+1) ..= n])`.
pub fn moving_average(series: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    let mut out = Vec::with_capacity(series.len());
    let mut sum = 0.0;
    for (n, &v) in series.iter().enumerate() {
        sum += v;
        if n >= window {
            sum -= series[n - window];
        }
        out.push(sum / (n + 1).min(window) as f64);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UeRecord {
    pub cell: usize,
    pub ue: usize,
    pub sinr_db: f64,
    pub rate: f64,
    pub power_idx: usize,
    pub combiner_idx: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsRecord {
    pub cell: usize,
    pub reward: f64,
    pub penalty_sum: f64,
    /// Exploration rate after this slot's decision; learned schemes only.
    pub epsilon: Option<f64>,
    /// Training loss of this slot, when the agent trained.
    pub loss: Option<f64>,
    pub irs_idx: Option<usize>,
}

/// Everything measured in one slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot: usize,
    pub ues: Vec<UeRecord>,
    pub bss: Vec<BsRecord>,
}

impl SlotRecord {
    pub fn mean_rate(&self) -> f64 {
        if self.ues.is_empty() {
            return 0.0;
        }
        self.ues.iter().map(|u| u.rate).sum::<f64>() / self.ues.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scheme: String,
    pub slots: usize,
    /// Last value of the moving average of the per-slot mean UE rate.
    pub final_ma_rate: Option<f64>,
    /// Mean rate over every UE and slot.
    pub mean_rate_all_ue: Option<f64>,
    pub config_hash: String,
    pub runtime_s: Option<f64>,
    pub ma_window: usize,
    pub per_cell_reward_mean: Vec<f64>,
    pub config: serde_json::Value,
}

/// Per-slot mean UE rate.
pub fn mean_rate_series(records: &[SlotRecord]) -> Vec<f64> {
    records.iter().map(SlotRecord::mean_rate).collect()
}

pub(crate) fn rate_statistics(records: &[SlotRecord], window: usize) -> (Option<f64>, Option<f64>) {
    let series = mean_rate_series(records);
    let final_ma = moving_average(&series, window).last().copied();
    let count: usize = records.iter().map(|r| r.ues.len()).sum();
    let mean = (count > 0).then(|| records.iter().flat_map(|r| &r.ues).map(|u| u.rate).sum::<f64>() / count as f64);
    (final_ma, mean)
}

pub(crate) fn reward_means(records: &[SlotRecord], cells: usize) -> Vec<f64> {
    let mut sums = vec![0.0; cells];
    for r in records {
        for b in &r.bss {
            sums[b.cell] += b.reward;
        }
    }
    let n = records.len().max(1) as f64;
    sums.into_iter().map(|s| s / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moving_average_examples() {
        assert_eq!(moving_average(&[1.0, 2.0, 3.0], 2), vec![1.0, 1.5, 2.5]);
        assert_eq!(moving_average(&[4.0, -1.0, 7.5], 1), vec![4.0, -1.0, 7.5]);
        assert_eq!(moving_average(&[2.0; 50], 7), vec![2.0; 50]);
        assert!(moving_average(&[], 10).is_empty());
    }

    #[test]
    fn moving_average_matches_direct_window_mean() {
        let series: Vec<f64> = (0..200).map(|i| ((i * 37) % 11) as f64 * 0.3).collect();
        let ma = moving_average(&series, 13);
        for (n, v) in ma.iter().enumerate() {
            let lo = n.saturating_sub(12);
            let direct = series[lo..=n].iter().sum::<f64>() / (n - lo + 1) as f64;
            assert!((v - direct).abs() < 1e-12);
        }
    }
}
