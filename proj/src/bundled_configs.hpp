#pragma once

namespace heatclf {

/// Text of a config shipped with the library, or nullptr.
const char* bundled_config_text(const char* name);
/// NULL-terminated list of bundled config names.
const char* const* bundled_config_names();
/// Directory bundled dataset configs resolve paths against
/// (HEATCLF_DATA_DIR overrides the build-time location).
const char* bundled_data_dir();

}  // namespace heatclf
