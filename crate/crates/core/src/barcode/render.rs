use crate::error::{Error, Result};
use crate::sensor::Scene;

use super::{encode_modules, BarcodeSpec};

/// Radiance of bars and of the background/quiet zones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    pub bar_radiance: f64,
    pub bg_radiance: f64,
}

impl Default for RenderStyle {
    fn default() -> RenderStyle {
        RenderStyle {
            bar_radiance: 0.05,
            bg_radiance: 0.9,
        }
    }
}

/// Paint an EAN-13 symbol (quiet zones included) into a scene with its top
/// left corner at (x, y). Rejects canvases too small for the symbol.
pub fn render_barcode(
    spec: &BarcodeSpec,
    scene: &mut Scene,
    x: usize,
    y: usize,
    style: &RenderStyle,
) -> Result<()> {
    let total_w = spec.total_width_px();
    let total_h = spec.bar_height_px;
    if x + total_w > scene.width() || y + total_h > scene.height() {
        return Err(Error::InvalidInput(format!(
            "canvas {}x{} too small for a {total_w}x{total_h} barcode at ({x}, {y})",
            scene.width(),
            scene.height()
        )));
    }

    let bg = [style.bg_radiance; 3];
    let bar = [style.bar_radiance; 3];
    scene.fill_rect(x, y, total_w, total_h, bg)?;

    let modules = encode_modules(spec.digits())?;
    let bars_x = x + spec.quiet_modules * spec.module_width_px;
    for (m, &dark) in modules.iter().enumerate() {
        if dark {
            scene.fill_rect(
                bars_x + m * spec.module_width_px,
                y,
                spec.module_width_px,
                total_h,
                bar,
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_rejects_small_canvas() {
        let spec = BarcodeSpec::from_payload(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2], 2, 7, 20).unwrap();
        let mut scene = Scene::dark(100, 50);
        assert!(render_barcode(&spec, &mut scene, 0, 0, &RenderStyle::default()).is_err());
    }

    #[test]
    fn render_paints_guard_bars_dark() {
        let spec = BarcodeSpec::from_payload(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2], 2, 7, 20).unwrap();
        let mut scene = Scene::uniform(260, 40, 0.5).unwrap();
        let style = RenderStyle::default();
        render_barcode(&spec, &mut scene, 4, 8, &style).unwrap();
        // First module after the left quiet zone is a guard bar.
        let bar_x = 4 + spec.quiet_modules * spec.module_width_px;
        assert_eq!(scene.pixel(10, bar_x)[0], style.bar_radiance);
        // Quiet zone is background.
        assert_eq!(scene.pixel(10, 4)[0], style.bg_radiance);
    }
}
