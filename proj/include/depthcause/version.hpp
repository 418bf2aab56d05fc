#ifndef DEPTHCAUSE_VERSION_HPP
#define DEPTHCAUSE_VERSION_HPP

#define DEPTHCAUSE_VERSION "0.1.0"

#endif
