/// Signal charge per photodiode at total resolution, in charge units.
/// Values are non-negative; shielded-border photodiodes carry dark current
/// only.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeFrame {
    pub width: usize,
    pub height: usize,
    /// Row-major, one value per photodiode.
    pub data: Vec<f64>,
}

impl ChargeFrame {
    pub fn zeros(width: usize, height: usize) -> ChargeFrame {
        ChargeFrame {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }
}

/// Digitized sensor output at total resolution, in serialized readout order
/// (row-major from (0,0)). Values lie in 0..=max_value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFrame {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub data: Vec<u16>,
}

impl RawFrame {
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.width + col]
    }

    /// Mean value over a window of the grid.
    pub fn mean_over(&self, x: usize, y: usize, w: usize, h: usize) -> f64 {
        let mut sum = 0.0;
        for row in y..y + h {
            for col in x..x + w {
                sum += self.get(row, col) as f64;
            }
        }
        sum / (w * h) as f64
    }
}

/// Demosaiced 3-channel image at effective resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbFrame {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    /// Row-major [r, g, b] triples.
    pub data: Vec<[u16; 3]>,
}

impl RgbFrame {
    pub fn new_filled(width: usize, height: usize, max_value: u16, fill: [u16; 3]) -> RgbFrame {
        RgbFrame {
            width,
            height,
            max_value,
            data: vec![fill; width * height],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> [u16; 3] {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, px: [u16; 3]) {
        self.data[row * self.width + col] = px;
    }
}
