// SPDX-License-Identifier: Apache-2.0
//
// mcmimo - multi-cell massive MIMO uplink simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MCMIMO_STATS_DUMP_HPP
#define MCMIMO_STATS_DUMP_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "mcmimo/channel_stats.hpp"
#include "mcmimo/estimation.hpp"

namespace mcmimo {

namespace detail {

inline nlohmann::json matrix_to_json(const Mat &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json vector_to_json(const Vec &v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

} // namespace detail

// Debug dump of all second-order quantities. Schema: each tensor is a flat
// list over links (j,l,k) or users (j,k) in index order; complex entries
// are [re, im] pairs. Documented in the README.
inline void dump_statistics_json(const ChannelStatistics &st, const EstimationModel &em,
                                 const std::string &path) {
    nlohmann::json j;
    j["cells"] = st.cells();
    j["users_per_cell"] = st.users();
    j["antennas"] = st.antennas();
    j["theta"] = nlohmann::json::array();
    j["r"] = nlohmann::json::array();
    j["rtilde"] = nlohmann::json::array();
    for (std::size_t i = 0; i < st.theta.size(); ++i) {
        j["theta"].push_back(detail::matrix_to_json(st.theta[i]));
        j["r"].push_back(detail::matrix_to_json(st.r[i]));
        j["rtilde"].push_back(detail::matrix_to_json(em.rtilde[i]));
    }
    j["phi"] = nlohmann::json::array();
    for (const Mat &m : em.phi) j["phi"].push_back(detail::matrix_to_json(m));
    j["hbar"] = nlohmann::json::array();
    for (const Vec &v : st.hbar) j["hbar"].push_back(detail::vector_to_json(v));

    std::ofstream out(path);
    if (!out) throw IoError("cannot open statistics dump file: " + path);
    out << j.dump(1) << '\n';
    if (!out) throw IoError("failed writing statistics dump: " + path);
}

} // namespace mcmimo

#endif
