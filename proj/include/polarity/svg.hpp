#ifndef POLARITY_SVG_HPP
#define POLARITY_SVG_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace polarity {

// Minimal native SVG plotting: axes, ticks, polylines, scatter points and a
// legend. Data-faithful rather than publication-styled.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::string& name, const std::vector<double>& xs,
                const std::vector<double>& ys);
  void add_points(const std::string& name, const std::vector<double>& xs,
                  const std::vector<double>& ys, const std::vector<std::string>& labels = {});
  // straight y = a + b*x guide line across the current x range
  void add_fit_line(const std::string& name, double intercept, double slope);
  void set_comment(std::string comment);  // embedded as an SVG comment

  void render(std::ostream& out) const;
  void save(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
    std::vector<std::string> labels;
    bool line = true;
    bool fit = false;
    double intercept = 0, slope = 0;
  };
  std::string title_, x_label_, y_label_, comment_;
  std::vector<Series> series_;
};

}  // namespace polarity

#endif  // POLARITY_SVG_HPP
