#pragma once

#include "ebm/model.hpp"

#include <iosfwd>
#include <string>

namespace ebm {

//! ModelParams plus the inputs used to build them.
struct RunConfig
{
    enum class SMode
    {
        Quadratic,  //!< s_0 = 1, s_2 = -0.477
        Computed,   //!< s_0..s_2N from the exact integral at beta
        Explicit,   //!< coefficients given in the file
    };

    ModelParams params;
    double beta_deg = 23.5;
    SMode s_mode = SMode::Quadratic;
};

/*!
 * Parses the JSON schema documented in docs/config.md. Unknown keys,
 * malformed JSON and inconsistent settings raise ConfigError.
 */
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace ebm
