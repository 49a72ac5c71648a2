#pragma once

#define DVORTEX_VERSION "0.9.0"
