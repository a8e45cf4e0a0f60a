#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace propreward {

struct Histogram
{
  double                   lo{0.0};
  double                   hi{0.0};
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; non-finite values are dropped.
inline Histogram make_histogram(const std::vector<double>& values, std::size_t bins)
{
  Histogram h;
  h.counts.assign(std::max<std::size_t>(bins, 1), 0);
  std::vector<double> finite;
  std::copy_if(values.begin(), values.end(), std::back_inserter(finite), [](double v) { return std::isfinite(v); });
  if (finite.empty())
  {
    return h;
  }
  auto [mn, mx] = std::minmax_element(finite.begin(), finite.end());
  h.lo          = *mn;
  h.hi          = *mx;
  const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
  for (double v : finite)
  {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - h.lo) / width) : 0;
    ++h.counts[std::min(b, h.counts.size() - 1)];
  }
  return h;
}

namespace detail {

inline std::string fixed(double v, int digits = 3)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string xml_escape(const std::string& s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '&':
      out += "&amp;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_histogram_svg(const std::vector<double>& values, std::size_t bins = 20,
                                        const std::string& title = "PoA ratio")
{
  using detail::fixed;
  const Histogram h = make_histogram(values, bins);

  constexpr double W = 640, H = 360, left = 50, right = 20, top = 40, bottom = 50;
  const double     plot_w = W - left - right, plot_h = H - top - bottom;
  const std::size_t peak  = std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double     bar_w  = plot_w / static_cast<double>(h.counts.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << detail::xml_escape(title) << "</text>\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
  {
    double bh = plot_h * static_cast<double>(h.counts[b]) / static_cast<double>(peak);
    svg << "<rect x=\"" << fixed(left + bar_w * static_cast<double>(b)) << "\" y=\"" << fixed(top + plot_h - bh)
        << "\" width=\"" << fixed(bar_w * 0.9) << "\" height=\"" << fixed(bh) << "\" fill=\"steelblue\"><title>"
        << h.counts[b] << "</title></rect>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  auto label = [&](double x, const std::string& text) {
    svg << "<text x=\"" << fixed(x) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << text << "</text>\n";
  };
  label(left, fixed(h.lo));
  label(left + plot_w, fixed(h.hi));
  svg << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << peak << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace propreward
