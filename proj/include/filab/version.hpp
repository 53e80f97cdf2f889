#pragma once

#define FILAB_VERSION "1.0.0"
