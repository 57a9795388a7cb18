#pragma once

// Public surface for out-of-tree extensions. Extension artifacts are shared
// libraries dropped into the configured extensions directory; each exports
//
//   extern "C" void csx_register_extensions(csx::translation::ExtensionsCatalog&);
//
// and registers factories for the class names scripts refer to. Extension
// sources include only this header.

#include "csx/cloud/allocation.hpp"
#include "csx/cloud/broker.hpp"
#include "csx/cloud/datacenter.hpp"
#include "csx/cloud/scheduler.hpp"
#include "csx/cloud/types.hpp"
#include "csx/errors.hpp"
#include "csx/schema/model.hpp"
#include "csx/sim/kernel.hpp"
#include "csx/translation/extensions.hpp"
#include "csx/translation/handlers.hpp"
