#pragma once

#define GRADCTL_VERSION "0.1.0"
