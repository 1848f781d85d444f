#pragma once

#include <filesystem>
#include <ostream>

#include <json.hpp>

#include "glassseg/metrics.hpp"

namespace glassseg {

/// {overall: {...}, per_category: {...}, degenerate_images: [...]}.
/// NaN values serialise as null.
nlohmann::json report_to_json(const MetricsReport& report);

void write_report_json(const std::filesystem::path& path,
                       const MetricsReport& report);

/// name,category,iou,acc,f_beta,mae,ber,tp,tn,fp,fn
void write_per_image_csv(std::ostream& out, const MetricsReport& report);

}  // namespace glassseg
