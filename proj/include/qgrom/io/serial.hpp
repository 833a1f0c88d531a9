#pragma once

#include <string>

#include "qgrom/eof.hpp"
#include "qgrom/qg/model.hpp"
#include "qgrom/sysid.hpp"

namespace qgrom::io {

// Little-endian binary records, each with an 8-byte magic and u32 version:
//   QGEOFB01 — EOF basis; QGRHSM01 — fitted RHS model; QGREST01 — solver
// restart carrying both leapfrog levels so a resumed run is bit-identical.

void save_basis(const std::string& path, const eof::EofBasis& b);
eof::EofBasis load_basis(const std::string& path);

void save_model(const std::string& path, const sysid::RhsModel& m);
sysid::RhsModel load_model(const std::string& path);

void save_state(const std::string& path, const qg::ModelState& s);
qg::ModelState load_state(const std::string& path);

}  // namespace qgrom::io
