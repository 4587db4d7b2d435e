package minisdk

// Tool registry with change tracking.

type Server struct {
	tools        []Tool
	toolsChanged bool
	wire         *Wire
}

func (s *Server) SetTools(tools []Tool) {
	s.tools = tools
	s.toolsChanged = true
	if s.toolsChanged {
		s.emitToolListUpdated()
	}
}

func (s *Server) emitToolListUpdated() {
	s.wire.Push(Frame{Kind: "tools"})
}
