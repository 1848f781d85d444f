#include "glassseg/report_io.hpp"

#include <cmath>
#include <fstream>

#include "glassseg/io.hpp"

namespace glassseg {

namespace {

nlohmann::json number(double v) {
  return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

nlohmann::json summary(const MetricsReport& r) {
  return {
      {"iou", number(r.iou)},
      {"acc", number(r.acc)},
      {"f_beta", number(r.f_beta)},
      {"mae", number(r.mae)},
      {"ber", number(r.ber)},
      {"images", r.image_count},
      {"tp", r.counts.tp},
      {"tn", r.counts.tn},
      {"fp", r.counts.fp},
      {"fn", r.counts.fn},
  };
}

}  // namespace

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json overall = summary(report);
  if (report.m_iou) overall["m_iou"] = *report.m_iou;
  if (report.m_ber) overall["m_ber"] = *report.m_ber;

  nlohmann::json per_category = nlohmann::json::object();
  for (const auto& [name, sub] : report.per_category) {
    per_category[name] = summary(sub);
  }
  nlohmann::json degenerate = nlohmann::json::array();
  for (const auto& d : report.degenerate_images) {
    degenerate.push_back({{"name", d.name}, {"reason", d.reason}});
  }
  return {{"overall", overall},
          {"per_category", per_category},
          {"degenerate_images", degenerate}};
}

void write_report_json(const fs::path& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string());
  out << report_to_json(report).dump(2) << '\n';
}

void write_per_image_csv(std::ostream& out, const MetricsReport& report) {
  out << "name,category,iou,acc,f_beta,mae,ber,tp,tn,fp,fn\n";
  for (const auto& m : report.per_image) {
    out << m.name << ',' << m.category.value_or("") << ',' << m.iou << ','
        << m.acc << ',' << m.f_beta << ',' << m.mae << ',';
    if (m.ber) out << *m.ber;
    out << ',' << m.counts.tp << ',' << m.counts.tn << ',' << m.counts.fp
        << ',' << m.counts.fn << '\n';
  }
}

}  // namespace glassseg
