#ifndef CUSPTOR_DOCUMENTS_HPP
#define CUSPTOR_DOCUMENTS_HPP

#include "cusptor/numberfield.hpp"

#include <json.hpp>

namespace cusptor::numberfield {

IdealSpec ideal_spec_from_json(const NumberField& K, const nlohmann::json& j);

}  // namespace cusptor::numberfield

#endif
