// Bundled sweep presets.  The same text is shipped as editable files under
// recipes/; a unit test keeps the two in sync.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faswpcn {

namespace recipe_detail {

inline constexpr std::string_view kSystemBlock =
    "[system]\n"
    "snr_db = 60\n"
    "p_u1 = 0.3\n"
    "p_u2 = 0.7\n"
    "alpha = 2.5\n"
    "l_p = 1.0\n"
    "d_t = 10.0\n"
    "d_u1 = 5.0\n"
    "d_u2 = 10.0\n"
    "thr_sic_db = 0.0\n"
    "thr_u1_db = 0.0\n"
    "thr_u2_db = 0.0\n";

inline constexpr std::string_view kNumericsBlock =
    "[numerics]\n"
    "mvn_accuracy = 1e-6\n"
    "mc_trials = 0\n"
    "seed = 12345\n";

}  // namespace recipe_detail

inline const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a", "fig3b"};
  return names;
}

/// Full config text of a bundled recipe; throws on an unknown name.
inline std::string recipe_config(std::string_view name) {
  using namespace recipe_detail;
  auto grids = [](int n, std::string_view w) {
    std::string g;
    for (const char* sec : {"[grid_u1]\n", "[grid_u2]\n"}) {
      g += sec;
      g += "n1 = " + std::to_string(n) + "\n";
      g += "n2 = " + std::to_string(n) + "\n";
      g += "w1 = " + std::string(w) + "\n";
      g += "w2 = " + std::string(w) + "\n";
      g += "\n";
    }
    return g;
  };
  std::string text;
  if (name == "fig2a") {
    text += "# Outage versus average SNR; one curve per square port count at a\n";
    text += "# fixed 1x1 wavelength aperture for both users.\n";
    text += std::string(kSystemBlock) + "\n";
    text += grids(2, "1.0");
    text += "[sweep]\n";
    text += "variable = snr_db\n";
    text += "values = 30 35 40 45 50 55 60 65 70\n";
    text += "curve_ports = 1 4 9 16 25\n\n";
    text += kNumericsBlock;
  } else if (name == "fig2b") {
    text += "# Outage versus average SNR; one curve per square aperture area\n";
    text += "# (in wavelengths^2) at a fixed 5x5 port grid for both users.\n";
    text += std::string(kSystemBlock) + "\n";
    text += grids(5, "1.0");
    text += "[sweep]\n";
    text += "variable = snr_db\n";
    text += "values = 30 35 40 45 50 55 60 65 70\n";
    text += "curve_apertures = 1 4 9\n\n";
    text += kNumericsBlock;
  } else if (name == "fig3a") {
    text += "# Outage versus port count (square grids) at 55 dB average SNR and a\n";
    text += "# fixed 1x1 wavelength aperture.\n";
    std::string sys(kSystemBlock);
    sys.replace(sys.find("snr_db = 60"), 11, "snr_db = 55");
    text += sys + "\n";
    text += grids(5, "1.0");
    text += "[sweep]\n";
    text += "variable = n_ports\n";
    text += "values = 1 4 9 16 25 36 49 64 81 100\n\n";
    text += kNumericsBlock;
  } else if (name == "fig3b") {
    text += "# Outage versus aperture area (wavelengths^2) at 55 dB average SNR;\n";
    text += "# curves for a 5x5 grid and the single fixed antenna.\n";
    std::string sys(kSystemBlock);
    sys.replace(sys.find("snr_db = 60"), 11, "snr_db = 55");
    text += sys + "\n";
    text += grids(5, "1.0");
    text += "[sweep]\n";
    text += "variable = aperture_w\n";
    text += "values = 1 2 3 4 5 6 7 8 9\n";
    text += "curve_ports = 1 25\n\n";
    text += kNumericsBlock;
  } else {
    throw std::invalid_argument("unknown recipe '" + std::string(name) +
                                "' (expected fig2a, fig2b, fig3a or fig3b)");
  }
  return text;
}

}  // namespace faswpcn
