use crate::error::{Error, Result};

/// RGB radiance map at the sensor's effective resolution.
///
/// Units are normalized radiance: a value of 1.0 exactly fills the well at
/// the sensor's reference exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl Scene {
    /// All-black scene.
    pub fn dark(width: usize, height: usize) -> Scene {
        Scene {
            width,
            height,
            data: vec![[0.0; 3]; width * height],
        }
    }

    /// Uniform gray scene at `level` radiance on all channels.
    pub fn uniform(width: usize, height: usize, level: f64) -> Result<Scene> {
        let mut scene = Scene::dark(width, height);
        scene.fill_rect(0, 0, width, height, [level; 3])?;
        Ok(scene)
    }

    pub fn from_pixels(width: usize, height: usize, data: Vec<[f64; 3]>) -> Result<Scene> {
        if data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "scene pixel buffer has {} entries, expected {}",
                data.len(),
                width * height
            )));
        }
        let scene = Scene {
            width,
            height,
            data,
        };
        scene.validate()?;
        Ok(scene)
    }

    fn validate(&self) -> Result<()> {
        for px in &self.data {
            for &v in px {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidInput(format!(
                        "scene radiance {v} outside [0, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Paint a rectangle with one radiance triple. Rejects out-of-range
    /// values and rectangles that leave the scene.
    pub fn fill_rect(
        &mut self,
        x: usize,
        y: usize,
        w: usize,
        h: usize,
        radiance: [f64; 3],
    ) -> Result<()> {
        for &v in &radiance {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!("radiance {v} outside [0, 1]")));
            }
        }
        if x + w > self.width || y + h > self.height {
            return Err(Error::InvalidInput(format!(
                "rect {w}x{h}+{x}+{y} exceeds scene {}x{}",
                self.width, self.height
            )));
        }
        for row in y..y + h {
            for col in x..x + w {
                self.data[row * self.width + col] = radiance;
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, row: usize, col: usize) -> [f64; 3] {
        self.data[row * self.width + col]
    }
}
