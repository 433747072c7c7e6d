/*  Copyright 2026 the modcs authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.  */

#ifndef MODCS_IO_HPP
#define MODCS_IO_HPP

#include <string>

#include <json.hpp>

#include "modcs/linalg.hpp"
#include "modcs/supports.hpp"

namespace modcs {

// Matrices and vectors are exchanged as headerless CSV.
Mat read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat& A);
Vec read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vec& v);

/// Parse "1,4,7" (or an empty string) into a sorted index set.
IndexSet parse_index_list(const std::string& text);

nlohmann::json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& text);

nlohmann::json index_set_to_json(const IndexSet& s);
IndexSet index_set_from_json(const nlohmann::json& j);

}  // namespace modcs

#endif
