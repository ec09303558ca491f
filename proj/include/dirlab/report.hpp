// Copyright 2026 The dirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIRLAB_REPORT_HPP
#define DIRLAB_REPORT_HPP

#include <string>

#include <json.hpp>

namespace dirlab {

// Reports use insertion-ordered JSON and a fixed dump format so that a rerun
// with the same config and seed is byte-identical. Non-finite values are
// encoded as the strings "inf" / "-inf" / "nan" (JSON has no literals for
// them); timestamps live only in the manifest envelope.
using Json = nlohmann::ordered_json;

/// Number, or the string encoding when not finite.
Json json_number(double v);

/// Canonical serialization: 2-space indent plus trailing newline.
std::string dump_report(const Json& report);

void write_text_file(const std::string& path, const std::string& content);

/// %.17g rendering for CSV cells.
std::string format_double(double v);

}  // namespace dirlab

#endif  // DIRLAB_REPORT_HPP
