//
